#include "tailmax/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace tailmax {

Json to_json(const RunReport& report) {
  Json j;
  j["command"] = report.command;
  j["parameters"] = report.parameters;
  Json outputs = Json::object();
  for (const auto& [name, path] : report.outputs) outputs[name] = path;
  j["outputs"] = outputs;
  j["timing"] = {{"wall_seconds", report.timing_seconds}};
  j["seed"] = report.seed;
  return j;
}

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw OutputError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.close();
  if (!out) throw OutputError("failed writing '" + path.string() + "'");
}

void write_json(const std::filesystem::path& path, const Json& document) {
  write_text(path, document.dump(2) + "\n");
}

Histogram make_histogram(std::span<const double> values, std::size_t bins) {
  if (values.empty()) throw std::invalid_argument("histogram of an empty sample");
  if (bins == 0) throw std::invalid_argument("histogram needs at least one bin");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  Histogram h;
  double lo = *lo_it, hi = *hi_it;
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  h.lower = lo;
  h.bin_width = (hi - lo) / static_cast<double>(bins);
  h.counts.assign(bins, 0);
  for (double v : values) {
    auto b = static_cast<std::size_t>((v - lo) / h.bin_width);
    ++h.counts[std::min(b, bins - 1)];
  }
  return h;
}

std::string histogram_csv(const Histogram& h, std::size_t total) {
  std::ostringstream out;
  out << "bin,lower,upper,count,density\r\n";
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    const double lower = h.lower + h.bin_width * static_cast<double>(b);
    const double density = static_cast<double>(h.counts[b]) / (static_cast<double>(total) * h.bin_width);
    out << b << ',' << format_double(lower) << ',' << format_double(lower + h.bin_width) << ',' << h.counts[b]
        << ',' << format_double(density) << "\r\n";
  }
  return out.str();
}

namespace {

std::string fixed(double x, int digits = 2) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << x;
  return s.str();
}

std::string escape_xml(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string histogram_svg(const Histogram& h, std::size_t total, double mean, double stdev, const std::string& title) {
  constexpr double width = 640, height = 400, left = 60, right = 20, top = 40, bottom = 50;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  const std::size_t bins = h.counts.size();
  const double span_x = h.bin_width * static_cast<double>(bins);

  std::vector<double> density(bins);
  double peak = 0.0;
  for (std::size_t b = 0; b < bins; ++b) {
    density[b] = static_cast<double>(h.counts[b]) / (static_cast<double>(total) * h.bin_width);
    peak = std::max(peak, density[b]);
  }
  const bool curve = std::isfinite(stdev) && stdev > 0.0;
  auto normal_pdf = [&](double x) {
    const double z = (x - mean) / stdev;
    return std::exp(-0.5 * z * z) / (stdev * std::sqrt(2.0 * std::numbers::pi));
  };
  if (curve) peak = std::max(peak, normal_pdf(mean));
  if (peak <= 0.0) peak = 1.0;
  auto sx = [&](double x) { return left + (x - h.lower) / span_x * plot_w; };
  auto sy = [&](double d) { return top + plot_h - d / peak * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"16\">" << escape_xml(title) << "</text>\n";
  for (std::size_t b = 0; b < bins; ++b) {
    const double x0 = sx(h.lower + h.bin_width * static_cast<double>(b));
    const double y0 = sy(density[b]);
    svg << "<rect x=\"" << fixed(x0) << "\" y=\"" << fixed(y0) << "\" width=\"" << fixed(plot_w / bins)
        << "\" height=\"" << fixed(top + plot_h - y0) << "\" fill=\"#9ecae1\" stroke=\"#3182bd\"/>\n";
  }
  if (curve) {
    svg << "<polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\" points=\"";
    constexpr int steps = 200;
    for (int i = 0; i <= steps; ++i) {
      const double x = h.lower + span_x * i / steps;
      svg << (i ? " " : "") << fixed(sx(x)) << ',' << fixed(sy(normal_pdf(x)));
    }
    svg << "\"/>\n";
  }
  svg << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w << "\" y2=\""
      << top + plot_h << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h
      << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double x = h.lower + span_x * i / 4;
    svg << "<text x=\"" << fixed(sx(x)) << "\" y=\"" << top + plot_h + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fixed(x, 4) << "</text>\n";
    const double d = peak * i / 4;
    svg << "<text x=\"" << left - 6 << "\" y=\"" << fixed(sy(d) + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fixed(d, 1) << "</text>\n";
  }
  svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">estimate</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace tailmax
