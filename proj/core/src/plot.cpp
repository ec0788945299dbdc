#include "openchain/plot.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "openchain/csv.hpp"
#include "openchain/errors.hpp"

namespace openchain {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 20.0;
constexpr double kBottom = 50.0;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                               "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

// to_chars rather than printf so the output ignores the C locale.
std::string num(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, 2);
  return std::string(buf, r.ptr);
}

std::string tick(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 3);
  return std::string(buf, r.ptr);
}

}  // namespace

std::string legend_label(const std::filesystem::path& csv) {
  const std::string stem = csv.stem().string();
  const auto us = stem.rfind('_');
  const std::string tail = us == std::string::npos ? stem : stem.substr(us + 1);
  const auto eq = tail.find('=');
  if (eq == std::string::npos) return stem;
  const std::string key = tail.substr(0, eq);
  const std::string value = tail.substr(eq + 1);
  if (key == "gamma" && (value == "inf" || value == "markov")) return "Markov";
  if (key == "gamma") return "γ=" + value;
  if (key == "Gamma") return "Γ=" + value;
  if (key == "delta") return "Δ=" + value;
  return tail;
}

void emit_plot(const std::vector<std::filesystem::path>& csvs, const std::filesystem::path& out,
               const std::string& quantity) {
  if (csvs.empty()) throw ConfigError("emit_plot: no CSV files given");
  const std::size_t col = column_index(quantity);

  std::vector<TrajectoryRecord> recs;
  for (const auto& p : csvs) recs.push_back(read_csv(p));
  for (std::size_t i = 0; i < recs.size(); ++i) {
    if (recs[i].empty()) throw ShapeError(csvs[i].string() + " has no rows");
    if (recs[i].samples.size() != recs[0].samples.size()) {
      throw ShapeError("emit_plot: " + csvs[i].string() + " is on a different time grid");
    }
    for (std::size_t k = 0; k < recs[i].samples.size(); ++k) {
      if (std::abs(recs[i].samples[k].t - recs[0].samples[k].t) > 1e-9) {
        throw ShapeError("emit_plot: " + csvs[i].string() + " is on a different time grid");
      }
    }
  }

  const double t0 = recs[0].samples.front().t;
  const double t1 = std::max(recs[0].samples.back().t, t0 + 1e-12);
  double lo = 0.0;
  double hi = 0.0;
  for (const auto& r : recs) {
    for (const auto& s : r.samples) {
      const double v = column_values(s)[col];
      if (std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  }
  if (hi - lo < 1e-12) {
    hi += 0.5;
    lo -= 0.5;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto X = [&](double t) { return kLeft + (t - t0) / (t1 - t0) * pw; };
  auto Y = [&](double v) { return kTop + (hi - v) / (hi - lo) * ph; };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
         num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  // Frame and ticks.
  svg += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) +
         "\" height=\"" + num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double t = t0 + (t1 - t0) * i / 5.0;
    const double v = lo + (hi - lo) * i / 5.0;
    svg += "<text x=\"" + num(X(t)) + "\" y=\"" + num(kTop + ph + 16) +
           "\" text-anchor=\"middle\">" + tick(t) + "</text>\n";
    svg += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(Y(v) + 4) +
           "\" text-anchor=\"end\">" + tick(v) + "</text>\n";
  }
  svg += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 10) +
         "\" text-anchor=\"middle\">t</text>\n";
  svg += "<text x=\"16\" y=\"" + num(kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         num(kTop + ph / 2) + ")\">" + escape(quantity) + "</text>\n";
  // Zero line.
  svg += "<line class=\"zero\" x1=\"" + num(kLeft) + "\" y1=\"" + num(Y(0.0)) + "\" x2=\"" +
         num(kLeft + pw) + "\" y2=\"" + num(Y(0.0)) +
         "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";

  for (std::size_t i = 0; i < recs.size(); ++i) {
    const char* color = kColors[i % (sizeof kColors / sizeof kColors[0])];
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto& s : recs[i].samples) {
      const double v = column_values(s)[col];
      if (!std::isfinite(v)) continue;
      if (!first) svg += ' ';
      svg += num(X(s.t)) + "," + num(Y(v));
      first = false;
    }
    svg += "\"/>\n";
    const double ly = kTop + 14 + 18.0 * static_cast<double>(i);
    const double lx = kLeft + pw + 12;
    svg += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" + num(lx + 20) +
           "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + num(lx + 26) + "\" y=\"" + num(ly) + "\">" +
           escape(legend_label(csvs[i])) + "</text>\n";
  }
  svg += "</g>\n</svg>\n";
  write_text(out, svg);
}

}  // namespace openchain
