#include "vatlas/svg.hpp"

#include <sstream>

namespace vatlas {

std::string render_svg(const Arrangement& arr, const Varifold* v) {
  const BBox2 box = arr.curves.bbox();
  const double pad = 0.05 * box.diagonal();
  const double x0 = box.lo.x() - pad, y1 = box.hi.y() + pad;
  const double w = box.hi.x() - box.lo.x() + 2 * pad, h = box.hi.y() - box.lo.y() + 2 * pad;
  const double scale = 800.0 / std::max(w, h);
  auto X = [&](const Vec2& p) { return (p.x() - x0) * scale; };
  auto Y = [&](const Vec2& p) { return (y1 - p.y()) * scale; };  // svg y grows downward

  std::ostringstream s;
  s.precision(6);
  s << std::fixed;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w * scale << "\" height=\"" << h * scale << "\">\n";
  // unbounded face is MINUS
  s << "<rect width=\"100%\" height=\"100%\" fill=\"#c8c8c8\"/>\n";
  for (const auto& f : arr.faces) {
    if (f.is_unbounded) continue;
    s << "<path fill-rule=\"evenodd\" stroke=\"none\" fill=\"" << (f.sign == Sign::Plus ? "#ffffff" : "#c8c8c8")
      << "\" d=\"";
    for (const auto& loop : f.boundary_loops) {
      const auto poly = arr.loop_polygon(loop);
      for (std::size_t i = 0; i < poly.size(); ++i) s << (i ? " L" : "M") << X(poly[i]) << ' ' << Y(poly[i]);
      s << " Z ";
    }
    s << "\"/>\n";
  }
  for (const auto& c : arr.curves.curves) {
    s << "<polygon fill=\"none\" stroke-width=\"2\" stroke=\"" << (c.family == Family::A ? "#1f4fbf" : "#c0392b")
      << "\" points=\"";
    for (const auto& p : c.points) s << X(p) << ',' << Y(p) << ' ';
    s << "\"/>\n";
  }
  for (const auto& x : arr.crossings)
    s << "<circle r=\"4\" fill=\"black\" cx=\"" << X(x.position) << "\" cy=\"" << Y(x.position) << "\"/>\n";
  if (v) {
    for (const auto& f : arr.faces) {
      if (f.is_unbounded) continue;
      s << "<text font-family=\"sans-serif\" font-size=\"18\" text-anchor=\"middle\" x=\"" << X(f.representative)
        << "\" y=\"" << Y(f.representative) << "\">" << v->m[f.id] << "</text>\n";
    }
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace vatlas
