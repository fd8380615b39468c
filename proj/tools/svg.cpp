#include "svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "impmatch/io.hpp"

namespace impmatch::cli {
namespace {

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

// Piecewise-linear approximation of the viridis colormap.
std::string colormap(double u) {
  static constexpr std::array<std::array<double, 3>, 5> stops{{
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  u = std::clamp(u, 0.0, 1.0) * static_cast<double>(stops.size() - 1);
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(u), stops.size() - 2);
  const double t = u - static_cast<double>(i);
  char buf[16];
  int rgb[3];
  for (int c = 0; c < 3; ++c) {
    rgb[c] = static_cast<int>(std::lround(stops[i][c] + t * (stops[i + 1][c] - stops[i][c])));
  }
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

void header(std::ostringstream& os, int width, int height) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

}  // namespace

std::string heatmap_svg(const MatchResult& result) {
  const auto& g = result.grid;
  constexpr int left = 70, top = 40, plot_w = 500, plot_h = 500, bar_w = 20;
  const double cw = static_cast<double>(plot_w) / static_cast<double>(g.kd_count);
  const double ch = static_cast<double>(plot_h) / static_cast<double>(g.kp_count);

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : result.error_surface) {
    if (std::isfinite(v) && v > 0.0) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!std::isfinite(lo)) lo = hi = 1.0;
  const double llo = std::log10(lo);
  const double lhi = std::max(std::log10(hi), llo + 1e-12);

  std::ostringstream os;
  header(os, left + plot_w + 120, top + plot_h + 70);
  os << "<text x=\"" << left << "\" y=\"24\" font-size=\"14\">Band MSE (dB^2), "
     << fixed(result.band.f_low) << "-" << fixed(result.band.f_high) << " Hz</text>\n";
  os << "<g id=\"cells\">\n";
  for (std::size_t i = 0; i < g.kp_count; ++i) {
    for (std::size_t j = 0; j < g.kd_count; ++j) {
      const double v = result.error_at(i, j);
      std::string fill = "#bbbbbb";
      if (std::isfinite(v)) {
        const double lv = v > 0.0 ? std::log10(v) : llo;
        fill = colormap((lv - llo) / (lhi - llo));
      }
      const double x = left + static_cast<double>(j) * cw;
      const double y = top + plot_h - static_cast<double>(i + 1) * ch;
      os << "<rect x=\"" << fixed(x) << "\" y=\"" << fixed(y) << "\" width=\"" << fixed(cw + 0.05)
         << "\" height=\"" << fixed(ch + 0.05) << "\" fill=\"" << fill << "\"/>\n";
    }
  }
  os << "</g>\n";

  const std::size_t bi = result.best_cell / g.kd_count;
  const std::size_t bj = result.best_cell % g.kd_count;
  os << "<rect id=\"best-cell\" data-kp=\"" << io::format_double(result.best_gains.kp)
     << "\" data-kd=\"" << io::format_double(result.best_gains.kd) << "\" data-mse=\""
     << io::format_double(result.best_error) << "\" x=\""
     << fixed(left + static_cast<double>(bj) * cw) << "\" y=\""
     << fixed(top + plot_h - static_cast<double>(bi + 1) * ch) << "\" width=\"" << fixed(cw)
     << "\" height=\"" << fixed(ch) << "\" fill=\"none\" stroke=\"red\" stroke-width=\"2\"/>\n";

  // Axes.
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\""
     << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double u = t / 4.0;
    const double kd = g.kd_range.first + u * (g.kd_range.second - g.kd_range.first);
    const double kp = g.kp_range.first + u * (g.kp_range.second - g.kp_range.first);
    os << "<text x=\"" << fixed(left + u * plot_w) << "\" y=\"" << top + plot_h + 18
       << "\" text-anchor=\"middle\">" << fixed(kd, 3) << "</text>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << fixed(top + plot_h - u * plot_h + 4)
       << "\" text-anchor=\"end\">" << fixed(kp, 1) << "</text>\n";
  }
  os << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << top + plot_h + 40
     << "\" text-anchor=\"middle\">Kd (N m s/rad)</text>\n";
  os << "<text transform=\"translate(20," << top + plot_h / 2
     << ") rotate(-90)\" text-anchor=\"middle\">Kp (N m/rad)</text>\n";

  // Color bar.
  const int bx = left + plot_w + 20;
  for (int s = 0; s < 50; ++s) {
    const double u = s / 49.0;
    os << "<rect x=\"" << bx << "\" y=\"" << fixed(top + plot_h - (s + 1) * plot_h / 50.0)
       << "\" width=\"" << bar_w << "\" height=\"" << fixed(plot_h / 50.0 + 0.5) << "\" fill=\""
       << colormap(u) << "\"/>\n";
  }
  os << "<text x=\"" << bx + bar_w + 4 << "\" y=\"" << top + plot_h << "\">" << fixed(lo, 4)
     << "</text>\n";
  os << "<text x=\"" << bx + bar_w + 4 << "\" y=\"" << top + 10 << "\">" << fixed(hi, 2)
     << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::string bode_overlay_svg(const BodeMagnitude& reference, const BodeMagnitude& matched,
                             const FrequencyBand& band, const PDGains& gains) {
  constexpr int left = 70, top = 40, plot_w = 600, plot_h = 360;
  double fmin = std::min(reference.frequencies.front(), matched.frequencies.front());
  double fmax = std::max(reference.frequencies.back(), matched.frequencies.back());
  double dmin = std::numeric_limits<double>::infinity();
  double dmax = -dmin;
  for (const auto* c : {&reference, &matched}) {
    for (double v : c->magnitude_db) {
      dmin = std::min(dmin, v);
      dmax = std::max(dmax, v);
    }
  }
  dmin = std::floor(dmin / 10.0) * 10.0;
  dmax = std::ceil(dmax / 10.0) * 10.0;
  if (dmax <= dmin) dmax = dmin + 10.0;
  const double lfmin = std::log10(fmin);
  const double lfmax = std::max(std::log10(fmax), lfmin + 1e-9);
  auto px = [&](double f) { return left + (std::log10(f) - lfmin) / (lfmax - lfmin) * plot_w; };
  auto py = [&](double db) { return top + (dmax - db) / (dmax - dmin) * plot_h; };

  std::ostringstream os;
  header(os, left + plot_w + 30, top + plot_h + 70);
  os << "<text x=\"" << left << "\" y=\"24\" font-size=\"14\">Bode magnitude, match Kp="
     << fixed(gains.kp, 3) << " Kd=" << fixed(gains.kd, 4) << "</text>\n";
  const double bx0 = px(std::clamp(band.f_low, fmin, fmax));
  const double bx1 = px(std::clamp(band.f_high, fmin, fmax));
  os << "<rect x=\"" << fixed(bx0) << "\" y=\"" << top << "\" width=\"" << fixed(bx1 - bx0)
     << "\" height=\"" << plot_h << "\" fill=\"#eeeeff\"/>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\""
     << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int decade = static_cast<int>(std::ceil(lfmin)); decade <= static_cast<int>(std::floor(lfmax));
       ++decade) {
    const double x = px(std::pow(10.0, decade));
    os << "<line x1=\"" << fixed(x) << "\" y1=\"" << top << "\" x2=\"" << fixed(x) << "\" y2=\""
       << top + plot_h << "\" stroke=\"#cccccc\"/>\n";
    os << "<text x=\"" << fixed(x) << "\" y=\"" << top + plot_h + 18 << "\" text-anchor=\"middle\">"
       << io::format_double(std::pow(10.0, decade)) << "</text>\n";
  }
  for (double db = dmin; db <= dmax + 1e-9; db += 10.0) {
    os << "<text x=\"" << left - 6 << "\" y=\"" << fixed(py(db) + 4) << "\" text-anchor=\"end\">"
       << fixed(db, 0) << "</text>\n";
  }
  os << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << top + plot_h + 40
     << "\" text-anchor=\"middle\">Frequency (Hz)</text>\n";
  os << "<text transform=\"translate(20," << top + plot_h / 2
     << ") rotate(-90)\" text-anchor=\"middle\">Magnitude (dB)</text>\n";

  auto polyline = [&](const BodeMagnitude& c, const char* id, const char* color) {
    os << "<polyline id=\"" << id << "\" fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < c.size(); ++i) {
      os << fixed(px(c.frequencies[i])) << ',' << fixed(py(c.magnitude_db[i])) << ' ';
    }
    os << "\"/>\n";
  };
  polyline(reference, "reference", "black");
  polyline(matched, "matched", "#d62728");
  os << "<text x=\"" << left + plot_w - 150 << "\" y=\"" << top + 20
     << "\">reference</text>\n<text x=\"" << left + plot_w - 150 << "\" y=\"" << top + 36
     << "\" fill=\"#d62728\">best match</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace impmatch::cli
