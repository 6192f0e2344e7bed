#include "egr/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "egr/error.hpp"
#include "egr/result_io.hpp"

namespace egr {

namespace {

constexpr int kCanvas = 640;
constexpr double kMargin = 40.0;

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string edge_color(double t) {
  // Linear blue -> red; midpoint for uniform weights.
  const int r = static_cast<int>(std::lround(255.0 * t));
  const int b = static_cast<int>(std::lround(255.0 * (1.0 - t)));
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x00%02x", r, b);
  return buf;
}

}  // namespace

std::string render_svg_string(const Matrix& x, const std::vector<double>* w, const Graph& g,
                              int dims) {
  const int n = g.n();
  const int d = x.cols();
  if (x.rows() != n || d < 1) throw Error(Errc::DimensionMismatch, "bad coordinate matrix");
  if (dims != 2 && dims != 3) throw Error(Errc::BadParam, "dims must be 2 or 3");
  if (w && static_cast<int>(w->size()) != g.m())
    throw Error(Errc::DimensionMismatch, "weight count differs from edge count");

  // Scale in realization space so the largest vertex magnitude is 1.
  double max_norm = 0;
  for (int i = 0; i < n; ++i) {
    double s = 0;
    for (int c = 0; c < d; ++c) s += x(i, c) * x(i, c);
    max_norm = std::max(max_norm, std::sqrt(s));
  }
  const double unit = max_norm > 0 ? 1.0 / max_norm : 1.0;

  const bool project3 = dims == 3 && d >= 3;
  const int used = std::min(d, dims);
  std::vector<double> px2(n), py2(n);
  // Orthographic view along (1,1,1)/sqrt(3): screen axes (1,-1,0)/sqrt(2)
  // and (-1,-1,2)/sqrt(6).
  const double e1[3] = {1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0};
  const double e2[3] = {-1.0 / std::sqrt(6.0), -1.0 / std::sqrt(6.0), 2.0 / std::sqrt(6.0)};
  for (int i = 0; i < n; ++i) {
    double c0 = 0, c1 = 0;
    if (project3) {
      for (int c = 0; c < 3; ++c) {
        c0 += x(i, c) * unit * e1[c];
        c1 += x(i, c) * unit * e2[c];
      }
    } else {
      c0 = used >= 1 ? x(i, 0) * unit : 0.0;
      c1 = used >= 2 ? x(i, 1) * unit : 0.0;
    }
    const double half = kCanvas / 2.0;
    const double span = half - kMargin;
    px2[i] = half + span * c0;
    py2[i] = half - span * c1;
  }

  double w_lo = 0, w_hi = 0;
  if (w && !w->empty()) {
    w_lo = *std::min_element(w->begin(), w->end());
    w_hi = *std::max_element(w->begin(), w->end());
  }

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kCanvas << "\" height=\""
      << kCanvas << "\" viewBox=\"0 0 " << kCanvas << " " << kCanvas << "\">\n"
      << "<rect width=\"" << kCanvas << "\" height=\"" << kCanvas << "\" fill=\"white\"/>\n"
      << "<g stroke-width=\"2\">\n";
  for (int k = 0; k < g.m(); ++k) {
    const auto [a, b] = g.edge(k);
    double t = 0.5;
    if (w && w_hi - w_lo > 1e-12) t = ((*w)[k] - w_lo) / (w_hi - w_lo);
    svg << "<line x1=\"" << px(px2[a]) << "\" y1=\"" << px(py2[a]) << "\" x2=\"" << px(px2[b])
        << "\" y2=\"" << px(py2[b]) << "\" stroke=\"" << edge_color(t) << "\"/>\n";
  }
  svg << "</g>\n<g fill=\"#202020\">\n";
  for (int i = 0; i < n; ++i)
    svg << "<circle cx=\"" << px(px2[i]) << "\" cy=\"" << px(py2[i]) << "\" r=\"5\"/>\n";
  svg << "</g>\n";
  if (d > dims)
    svg << "<text x=\"8\" y=\"20\" font-family=\"monospace\" font-size=\"14\">d=" << d << ": "
        << dims << "-D projection</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

void render_svg(const Matrix& x, const std::vector<double>* w, const Graph& g,
                const std::filesystem::path& path, int dims) {
  write_text_file(path, render_svg_string(x, w, g, dims));
}

}  // namespace egr
