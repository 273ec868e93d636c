#include "burstcoord/svg_plot.hpp"

#include <algorithm>
#include <array>
#include <cstdio>

namespace burstcoord {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 60, kRight = 150, kTop = 20, kBottom = 50;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

double px(double lambda) { return kLeft + lambda * (kWidth - kLeft - kRight); }
double py(double value) {
  return kTop + (1.0 - std::clamp(value, 0.0, 1.0)) * (kHeight - kTop - kBottom);
}

}  // namespace

std::string sweep_svg(const std::vector<SweepRow>& rows, const std::vector<Detector>& detectors,
                      const std::string& timestamp) {
  static const std::array<const char*, 4> colors{"#7b3294", "#0571b0", "#e66101", "#808080"};
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
       num(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  if (!timestamp.empty()) s += "<!-- generated " + timestamp + " -->\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Axes and ticks.
  const double x0 = px(0), x1 = px(1), y0 = py(0), y1 = py(1);
  s += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x1) + "\" y2=\"" +
       num(y0) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x0) + "\" y2=\"" +
       num(y1) + "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 10; k += 2) {
    const double v = k / 10.0;
    s += "<text x=\"" + num(px(v)) + "\" y=\"" + num(y0 + 18) + "\" text-anchor=\"middle\">" +
         num(v).substr(0, 3) + "</text>\n";
    s += "<text x=\"" + num(x0 - 8) + "\" y=\"" + num(py(v) + 4) + "\" text-anchor=\"end\">" +
         num(v).substr(0, 3) + "</text>\n";
  }
  s += "<text x=\"" + num((x0 + x1) / 2) + "\" y=\"" + num(kHeight - 10) +
       "\" text-anchor=\"middle\">lambda</text>\n";
  s += "<text x=\"15\" y=\"" + num((y0 + y1) / 2) + "\" transform=\"rotate(-90 15 " +
       num((y0 + y1) / 2) + ")\" text-anchor=\"middle\">NMI</text>\n";

  for (std::size_t d = 0; d < detectors.size(); ++d) {
    const auto series = summarize(rows, detectors[d]);
    if (series.empty()) continue;
    const char* color = colors[d % colors.size()];
    std::string band, line;
    for (const auto& p : series) band += num(px(p.lambda)) + "," + num(py(p.mean + p.sd)) + " ";
    for (auto it = series.rbegin(); it != series.rend(); ++it) {
      band += num(px(it->lambda)) + "," + num(py(it->mean - it->sd)) + " ";
    }
    for (const auto& p : series) line += num(px(p.lambda)) + "," + num(py(p.mean)) + " ";
    band.pop_back();
    line.pop_back();
    s += "<polygon points=\"" + band + "\" fill=\"" + color + "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n";
    s += "<polyline points=\"" + line + "\" fill=\"none\" stroke=\"" + color +
         "\" stroke-width=\"2\"/>\n";
    const double ly = kTop + 20.0 * static_cast<double>(d + 1);
    s += "<line x1=\"" + num(x1 + 15) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(x1 + 35) +
         "\" y2=\"" + num(ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + num(x1 + 40) + "\" y=\"" + num(ly + 4) + "\">" + to_string(detectors[d]) +
         "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace burstcoord
