#include "glvortex/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace glvortex {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

std::string render_svg(const Field& field, const Target& t, const VortexCensus* census,
                       const std::vector<Ball>& balls, const RenderOptions& opts) {
  const Domain& d = field.domain();
  const double xmin = d.x(0), xmax = d.x(d.nx() - 1);
  const double ymin = d.y(0), ymax = d.y(d.ny() - 1);
  const double span = std::max(xmax - xmin, ymax - ymin);
  const double scale = opts.pixels / span;
  auto px = [&](double x) { return (x - xmin) * scale; };
  auto py = [&](double y) { return (ymax - y) * scale; };
  const int stride = std::max(1, (std::max(d.nx(), d.ny()) + opts.max_glyphs - 1) / opts.max_glyphs);
  const double glyph = 0.4 * stride * d.h() * scale;

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num((xmax - xmin) * scale)
      << "\" height=\"" << num((ymax - ymin) * scale) << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<g stroke=\"#333\" stroke-width=\"1\" fill=\"none\">\n";
  for (int iy = 0; iy < d.ny(); iy += stride) {
    for (int ix = 0; ix < d.nx(); ix += stride) {
      const std::size_t p = d.index(ix, iy);
      if (d.kind(p) == NodeKind::Exterior) continue;
      const Vec u = field.at(p);
      const double cx = px(d.x(ix)), cy = py(d.y(iy));
      const double phi = std::atan2(u[1], u[0]);
      const double len = std::min(1.0, std::hypot(u[0], u[1]) / std::max(t.radius(), 1e-12));
      if (t.kind() == TargetKind::CrossField) {
        const int k = t.fold();
        for (int j = 0; j < k; ++j) {
          const double a = (phi + 2.0 * std::numbers::pi * j) / k;
          out << "<line x1=\"" << num(cx) << "\" y1=\"" << num(cy) << "\" x2=\""
              << num(cx + glyph * len * std::cos(a)) << "\" y2=\"" << num(cy - glyph * len * std::sin(a))
              << "\"/>\n";
        }
      } else {
        const double ex = glyph * len * std::cos(phi), ey = glyph * len * std::sin(phi);
        const double tipx = cx + ex, tipy = cy - ey;
        out << "<line x1=\"" << num(cx - ex) << "\" y1=\"" << num(cy + ey) << "\" x2=\"" << num(tipx)
            << "\" y2=\"" << num(tipy) << "\"/>\n";
        const double hx = 0.35 * ex, hy = 0.35 * ey;
        out << "<polyline points=\"" << num(tipx - hx - hy) << "," << num(tipy + hy - hx) << " "
            << num(tipx) << "," << num(tipy) << " " << num(tipx - hx + hy) << ","
            << num(tipy + hy + hx) << "\"/>\n";
      }
    }
  }
  out << "</g>\n";
  if (census) {
    for (const auto& v : census->vortices) {
      const char* colour = v.winding > 0 ? "#c0392b" : "#2471a3";
      out << "<circle cx=\"" << num(px(v.center.x)) << "\" cy=\"" << num(py(v.center.y))
          << "\" r=\"5\" fill=\"" << colour << "\"/>\n"
          << "<text x=\"" << num(px(v.center.x) + 7) << "\" y=\"" << num(py(v.center.y) - 7)
          << "\" font-size=\"12\" fill=\"" << colour << "\">" << (v.winding > 0 ? "+" : "")
          << v.winding << "</text>\n";
    }
  }
  for (const auto& b : balls) {
    out << "<circle cx=\"" << num(px(b.center.x)) << "\" cy=\"" << num(py(b.center.y)) << "\" r=\""
        << num(b.radius * scale) << "\" fill=\"none\" stroke=\"#27ae60\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << num(px(b.center.x + b.radius)) << "\" y=\"" << num(py(b.center.y + b.radius))
        << "\" font-size=\"12\" fill=\"#27ae60\">d=" << b.charge << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace glvortex
