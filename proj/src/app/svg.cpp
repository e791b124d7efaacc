#include "app/svg.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <ostream>

namespace bettitest::app {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

}  // namespace

void write_power_svg(std::ostream& out, const std::vector<PowerRow>& rows, const std::string& title) {
  constexpr double width = 640, height = 420, left = 60, right = 150, top = 40, bottom = 50;
  constexpr std::array<const char*, 6> colors{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  const double plot_w = width - left - right, plot_h = height - top - bottom;

  std::map<std::string, std::vector<const PowerRow*>> series;
  std::size_t n_min = 0, n_max = 1;
  bool first = true;
  for (const auto& r : rows) {
    series[r.method].push_back(&r);
    n_min = first ? r.n : std::min(n_min, r.n);
    n_max = first ? r.n : std::max(n_max, r.n);
    first = false;
  }
  if (n_max == n_min) n_max = n_min + 1;
  auto x = [&](std::size_t n) {
    return left + plot_w * static_cast<double>(n - n_min) / static_cast<double>(n_max - n_min);
  };
  auto y = [&](double p) { return top + plot_h * (1.0 - p); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << left << "\" y=\"24\" font-size=\"14\">" << escape(title) << "</text>\n";
  // axes and ticks
  out << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w << "\" y2=\""
      << top + plot_h << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h
      << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double p = i / 5.0;
    out << "<line x1=\"" << left - 4 << "\" y1=\"" << y(p) << "\" x2=\"" << left + plot_w << "\" y2=\"" << y(p)
        << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << left - 8 << "\" y=\"" << y(p) + 4 << "\" text-anchor=\"end\">" << format_double(p)
        << "</text>\n";
  }
  std::vector<std::size_t> ns;
  for (const auto& r : rows) ns.push_back(r.n);
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  for (auto n : ns)
    out << "<text x=\"" << x(n) << "\" y=\"" << top + plot_h + 18 << "\" text-anchor=\"middle\">" << n
        << "</text>\n";
  out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">n</text>\n";
  out << "<text x=\"16\" y=\"" << top + plot_h / 2 << "\" transform=\"rotate(-90 16 " << top + plot_h / 2
      << ")\" text-anchor=\"middle\">power</text>\n";

  std::size_t k = 0;
  for (auto& [method, pts] : series) {
    std::sort(pts.begin(), pts.end(), [](const PowerRow* a, const PowerRow* b) { return a->n < b->n; });
    const char* color = colors[k % colors.size()];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto* p : pts) out << x(p->n) << ',' << y(p->power) << ' ';
    out << "\"/>\n";
    for (const auto* p : pts)
      out << "<circle cx=\"" << x(p->n) << "\" cy=\"" << y(p->power) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    const double ly = top + 16.0 * static_cast<double>(k);
    out << "<line x1=\"" << left + plot_w + 16 << "\" y1=\"" << ly << "\" x2=\"" << left + plot_w + 36
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << left + plot_w + 42 << "\" y=\"" << ly + 4 << "\">" << escape(method) << "</text>\n";
    ++k;
  }
  out << "</svg>\n";
}

}  // namespace bettitest::app
