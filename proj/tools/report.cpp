#include "report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "tolerances.hpp"

namespace kaclab::cli {

bool RunReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::string formatNumber(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string cellText(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return formatNumber(*d);
  return std::get<std::string>(c);
}

// RFC 4180: quote fields holding separators, quotes or line breaks.
std::string csvField(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

nlohmann::json cellJson(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return formatNumber(*d);
    return *d;
  }
  return std::get<std::string>(c);
}

std::string escapeXml(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

void writeCsv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csvField(t.columns[i]);
  os << "\r\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csvField(cellText(row[i]));
    os << "\r\n";
  }
}

void writeJson(std::ostream& os, const RunConfig& cfg, const RunReport& r) {
  nlohmann::json j;
  j["tool"] = "kaclab";
  j["version"] = kToolVersion;
  j["config"] = cfg.echo();
  j["tolerances"] = toleranceTable();
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.table.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[r.table.columns[i]] = cellJson(row[i]);
    rows.push_back(obj);
  }
  j["table"] = {{"name", r.table.name}, {"columns", r.table.columns}, {"rows", rows}};
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}, {"tolerance", c.tolerance}});
  }
  j["checks"] = checks;
  j["passed"] = r.passed();
  if (!r.extra.is_null()) j["extra"] = r.extra;
  os << j.dump(2) << "\n";
}

void writeSvg(std::ostream& os, const Plot& p) {
  constexpr double W = 640, H = 420, left = 70, right = 20, top = 40, bottom = 55;
  auto tx = [&](double v) { return p.logX ? std::log10(v) : v; };
  auto ty = [&](double v) { return p.logY ? std::log10(v) : v; };
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : p.series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if ((p.logX && s.x[i] <= 0) || (p.logY && s.y[i] <= 0) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x0 -= 0.5, x1 += 0.5;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto px = [&](double v) { return left + (tx(v) - x0) / (x1 - x0) * (W - left - right); };
  auto py = [&](double v) { return H - bottom - (ty(v) - y0) / (y1 - y0) * (H - top - bottom); };
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escapeXml(p.title)
     << "</text>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << H - bottom << "\" x2=\"" << W - right << "\" y2=\"" << H - bottom
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << H - bottom
     << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4, yv = y0 + (y1 - y0) * i / 4;
    const double sx = left + (W - left - right) * i / 4, sy = H - bottom - (H - top - bottom) * i / 4;
    os << "<text x=\"" << sx << "\" y=\"" << H - bottom + 16 << "\" text-anchor=\"middle\">"
       << formatNumber(std::round((p.logX ? std::pow(10, xv) : xv) * 1000) / 1000) << "</text>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << sy + 4 << "\" text-anchor=\"end\">"
       << formatNumber(std::round((p.logY ? std::pow(10, yv) : yv) * 1000) / 1000) << "</text>\n";
  }
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << escapeXml(p.xLabel)
     << "</text>\n";
  os << "<text x=\"16\" y=\"" << H / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << H / 2 << ")\">"
     << escapeXml(p.yLabel) << "</text>\n";
  for (std::size_t k = 0; k < p.series.size(); ++k) {
    const auto& s = p.series[k];
    const char* color = colors[k % 6];
    std::string path;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if ((p.logX && s.x[i] <= 0) || (p.logY && s.y[i] <= 0) || !std::isfinite(s.y[i])) continue;
      path += (path.empty() ? "M" : " L") + formatNumber(px(s.x[i])) + " " + formatNumber(py(s.y[i]));
      if (!s.line) {
        os << "<circle cx=\"" << formatNumber(px(s.x[i])) << "\" cy=\"" << formatNumber(py(s.y[i]))
           << "\" r=\"3\" fill=\"" << color << "\"/>\n";
      }
    }
    if (s.line && !path.empty()) {
      os << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
    }
    os << "<text x=\"" << W - right - 150 << "\" y=\"" << top + 14 * (k + 1) << "\" fill=\"" << color << "\">"
       << escapeXml(s.name) << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace kaclab::cli
