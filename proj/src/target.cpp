#include "glvortex/target.hpp"

#include <numbers>
#include <string>

namespace glvortex {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::CutLocus: return "CutLocus";
    case Errc::Unsupported: return "Unsupported";
    case Errc::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case Errc::WindingMismatch: return "WindingMismatch";
    case Errc::BallsOverlap: return "BallsOverlap";
    case Errc::ComponentTouchesBoundary: return "ComponentTouchesBoundary";
    case Errc::EtaTooLarge: return "EtaTooLarge";
    case Errc::NonconvergedODE: return "NonconvergedODE";
    case Errc::IllConditionedFit: return "IllConditionedFit";
    case Errc::RhoBarViolated: return "RhoBarViolated";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Config: return "ConfigError";
    case Errc::Io: return "IoError";
  }
  return "Unknown";
}

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Largest tube on which |D dist|^2 + (1 - dist/delta)|D Pi|^2 <= |v|^2 holds
// for circles and spheres: inside the curve |D Pi v| = a/(a - t) |v_T|.
constexpr double kDeltaFraction = 0.5;
}  // namespace

Target::Target(TargetKind kind, int fold, double radius)
    : kind_(kind), fold_(fold), radius_(radius), delta_(kDeltaFraction * radius) {}

Target Target::circle() { return Target(TargetKind::Circle, 1, 1.0); }

Target Target::cross_field(int k) {
  if (k < 1) throw Error(Errc::InvalidArgument, "cross-field fold must be positive");
  return Target(TargetKind::CrossField, k, 1.0 / k);
}

Target Target::sphere2() { return Target(TargetKind::Sphere2, 0, 1.0); }

Target Target::parse(std::string_view text) {
  if (text == "circle") return circle();
  if (text == "sphere2") return sphere2();
  constexpr std::string_view prefix = "crossfield:";
  if (text.substr(0, prefix.size()) == prefix) {
    const std::string rest(text.substr(prefix.size()));
    std::size_t used = 0;
    int k = 0;
    try {
      k = std::stoi(rest, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != rest.size() || rest.empty() || k < 1)
      throw Error(Errc::Config, "bad cross-field fold in '" + std::string(text) + "'");
    return cross_field(k);
  }
  throw Error(Errc::Config, "unknown target '" + std::string(text) + "'");
}

std::string Target::to_string() const {
  switch (kind_) {
    case TargetKind::Circle: return "circle";
    case TargetKind::CrossField: return "crossfield:" + std::to_string(fold_);
    case TargetKind::Sphere2: return "sphere2";
  }
  return "?";
}

std::optional<double> Target::circumference() const {
  if (!circle_like()) return std::nullopt;
  return kTwoPi * radius_;
}

Vec Target::project_unchecked(const Vec& y) const {
  const double r = norm(y);
  if (r == 0.0) throw Error(Errc::CutLocus, "projection undefined at the origin");
  return (radius_ / r) * y;
}

Vec Target::project(const Vec& y) const {
  if (norm(y) <= radius_ - delta_)
    throw Error(Errc::CutLocus, "point outside the tubular neighbourhood");
  return project_unchecked(y);
}

Vec Target::tangent_part(const Vec& p, const Vec& v) const {
  const double r2 = dot(p, p);
  if (r2 == 0.0) return v;
  return v - (dot(p, v) / r2) * p;
}

DistDerivatives dist_and_derivatives(const Target& t, const Vec& y, const Vec& v) {
  const double r = norm(y);
  const double d = t.dist(y);
  if (r <= t.radius() - t.delta())
    throw Error(Errc::CutLocus, "point outside the tubular neighbourhood");
  const Vec n = (1.0 / r) * y;
  const double vn = dot(v, n);
  // D Pi(y)[v] = (a / |y|) (v - (v.n) n)
  const Vec d_proj = (t.radius() / r) * (v - vn * n);
  DistDerivatives out{d, std::nullopt, d_proj};
  if (d > 0.0) out.d_dist = (r > t.radius() ? 1.0 : -1.0) * vn;
  return out;
}

Potential Potential::for_target(PotentialKind kind, const Target& t) {
  Potential p;
  p.kind = kind;
  const double a = t.radius();
  if (kind == PotentialKind::SquaredDistance) {
    p.m_F = 2.0;
    p.M_F = 2.0;
    p.delta_F = t.delta();
  } else {
    // F / dist^2 = (a + |z|)^2 / (4 a^2) for |z| in (a - delta_F, a + delta_F).
    p.delta_F = 0.9 * t.delta();
    const double lo = (2.0 * a - p.delta_F) / (2.0 * a);
    const double hi = (2.0 * a + p.delta_F) / (2.0 * a);
    p.m_F = 2.0 * lo * lo;
    p.M_F = 2.0 * hi * hi;
  }
  return p;
}

PotentialKind Potential::parse_kind(std::string_view text) {
  if (text == "quartic") return PotentialKind::Quartic;
  if (text == "dist2") return PotentialKind::SquaredDistance;
  throw Error(Errc::Config, "unknown potential '" + std::string(text) + "'");
}

std::string Potential::kind_name(PotentialKind kind) {
  return kind == PotentialKind::Quartic ? "quartic" : "dist2";
}

PotentialValue potential_value_grad(const Potential& p, const Target& t, const Vec& z) {
  const double a = t.radius();
  if (p.kind == PotentialKind::Quartic) {
    const double s = a * a - dot(z, z);
    return {s * s / (4.0 * a * a), (-s / (a * a)) * z};
  }
  const double r = norm(z);
  if (r == 0.0) throw Error(Errc::CutLocus, "squared-distance gradient undefined at the origin");
  const double d = r - a;
  return {d * d, (2.0 * d / r) * z};
}

double minimal_length(const Target& t, HomotopyClass c) {
  if (!t.circle_like()) {
    if (c.winding != 0) throw Error(Errc::Unsupported, "sphere2 has no non-trivial loops");
    return 0.0;
  }
  return *t.circumference() * std::abs(c.winding);
}

double systole(const Target& t) {
  if (!t.circle_like()) throw Error(Errc::Unsupported, "sphere2 is simply connected");
  return *t.circumference();
}

double singular_energy(const Target& t, HomotopyClass c) {
  if (!t.circle_like()) {
    if (c.winding != 0) throw Error(Errc::Unsupported, "sphere2 has no non-trivial loops");
    return 0.0;
  }
  // |d| unit charges beat any coarser splitting since d_i^2 >= |d_i|.
  const double L0 = *t.circumference();
  return std::abs(c.winding) * L0 * L0 / (2.0 * kTwoPi);
}

std::vector<Vec> geodesic_loop(const Target& t, HomotopyClass c, int samples) {
  if (samples < 3) throw Error(Errc::InvalidArgument, "geodesic loop needs at least 3 samples");
  if (!t.circle_like() && c.winding != 0)
    throw Error(Errc::Unsupported, "sphere2 has no non-trivial loops");
  std::vector<Vec> loop(static_cast<std::size_t>(samples));
  const double a = t.radius();
  for (int j = 0; j < samples; ++j) {
    const double phi = kTwoPi * c.winding * j / samples;
    loop[static_cast<std::size_t>(j)] = {a * std::cos(phi), a * std::sin(phi), 0.0};
  }
  return loop;
}

int loop_winding(const std::vector<Vec>& loop) {
  double total = 0.0;
  const std::size_t n = loop.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec& p = loop[i];
    const Vec& q = loop[(i + 1) % n];
    total += std::atan2(p[0] * q[1] - p[1] * q[0], p[0] * q[0] + p[1] * q[1]);
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

}  // namespace glvortex
