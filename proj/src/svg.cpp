#include "geomir/svg.hpp"

#include <iomanip>
#include <sstream>

namespace geomir {

namespace {

std::string escape(const std::string& text) {
  std::string out;
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const LayoutGraph& graph, const std::vector<std::string>& draw_order,
                       const LayoutConfig& cfg) {
  constexpr double kThumb = 32.0;
  std::ostringstream svg;
  svg << std::fixed << std::setprecision(2);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << cfg.canvas_width << "\" height=\""
      << cfg.canvas_height << "\" viewBox=\"0 0 " << cfg.canvas_width << ' ' << cfg.canvas_height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n<g stroke=\"#b0b0b0\">\n";
  for (const Spring& s : graph.springs) {
    const auto& a = graph.particles[static_cast<std::size_t>(s.parent)].position;
    const auto& b = graph.particles[static_cast<std::size_t>(s.child)].position;
    svg << "<line x1=\"" << a.x() << "\" y1=\"" << a.y() << "\" x2=\"" << b.x() << "\" y2=\"" << b.y() << "\"/>\n";
  }
  svg << "</g>\n";
  for (const auto& p : graph.particles) {
    if (p.level == Level::Image) continue;
    const char* fill = p.level == Level::Root ? "#333333" : p.level == Level::Country ? "#c0392b" : "#2980b9";
    svg << "<circle cx=\"" << p.position.x() << "\" cy=\"" << p.position.y() << "\" r=\"6\" fill=\"" << fill
        << "\"/>\n";
    if (!p.payload.empty()) {
      svg << "<text x=\"" << p.position.x() + 8 << "\" y=\"" << p.position.y() - 8
          << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(p.payload) << "</text>\n";
    }
  }
  for (const auto& id : draw_order) {
    const int i = graph.find(image_particle_id(id));
    if (i < 0) continue;
    const auto& pos = graph.particles[static_cast<std::size_t>(i)].position;
    svg << "<rect class=\"image\" data-id=\"" << escape(id) << "\" x=\"" << pos.x() - kThumb / 2 << "\" y=\""
        << pos.y() - kThumb / 2 << "\" width=\"" << kThumb << "\" height=\"" << kThumb
        << "\" fill=\"#f5f5f5\" stroke=\"#555555\"><title>" << escape(id) << "</title></rect>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace geomir
