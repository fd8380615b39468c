#include "impmatch/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "impmatch/errors.hpp"
#include "json.hpp"

namespace impmatch::io {
namespace {

constexpr std::string_view kLayerFormat = "impmatch.mlp_first_layer";

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view text, std::size_t line_no) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ValidationError("line " + std::to_string(line_no) + ": cannot parse number '" +
                          std::string(text) + "'");
  }
  return value;
}

// Reads a numeric CSV with a fixed header into columns.
std::vector<std::vector<double>> read_columns(std::istream& in, std::string_view header) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("csv: empty input");
  if (trim(line) != header) {
    throw ValidationError("csv: expected header '" + std::string(header) + "', got '" +
                          std::string(trim(line)) + "'");
  }
  const std::size_t width = split(header, ',').size();
  std::vector<std::vector<double>> cols(width);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != width) {
      throw ValidationError("csv line " + std::to_string(line_no) + ": expected " +
                            std::to_string(width) + " fields");
    }
    for (std::size_t c = 0; c < width; ++c) cols[c].push_back(parse_double(fields[c], line_no));
  }
  return cols;
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void write_time_series(std::ostream& out, const TimeSeries& ts) {
  ts.validate();
  out << "t,theta_des,theta_meas\n";
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double t = static_cast<double>(k) / ts.sample_rate;
    out << format_double(t) << ',' << format_double(ts.command[k]) << ','
        << format_double(ts.measured[k]) << '\n';
  }
}

TimeSeries read_time_series(std::istream& in) {
  auto cols = read_columns(in, "t,theta_des,theta_meas");
  const auto& t = cols[0];
  if (t.size() < 2) throw ValidationError("time series csv: need at least two rows");
  const double span = t.back() - t.front();
  if (!(span > 0.0)) throw ValidationError("time series csv: time must increase");
  const double dt = span / static_cast<double>(t.size() - 1);
  for (std::size_t k = 1; k < t.size(); ++k) {
    if (std::abs((t[k] - t[k - 1]) - dt) > 1e-6 * dt) {
      throw ValidationError("time series csv: non-uniform sampling at row " + std::to_string(k + 1));
    }
  }
  TimeSeries ts;
  ts.sample_rate = static_cast<double>(t.size() - 1) / span;
  ts.command = std::move(cols[1]);
  ts.measured = std::move(cols[2]);
  ts.validate();
  return ts;
}

void write_bode(std::ostream& out, const BodeMagnitude& bode) {
  out << "freq_hz,mag_db\n";
  for (std::size_t i = 0; i < bode.size(); ++i) {
    out << format_double(bode.frequencies[i]) << ',' << format_double(bode.magnitude_db[i]) << '\n';
  }
}

BodeMagnitude read_bode(std::istream& in) {
  auto cols = read_columns(in, "freq_hz,mag_db");
  BodeMagnitude bode{std::move(cols[0]), std::move(cols[1])};
  bode.validate();
  if (bode.size() == 0) throw ValidationError("bode csv: no rows");
  return bode;
}

void write_surface(std::ostream& out, const MatchResult& result) {
  out << "kp,kd,mse_db2\n";
  const auto& g = result.grid;
  for (std::size_t i = 0; i < g.kp_count; ++i) {
    for (std::size_t j = 0; j < g.kd_count; ++j) {
      out << format_double(g.kp_at(i)) << ',' << format_double(g.kd_at(j)) << ','
          << format_double(result.error_at(i, j)) << '\n';
    }
  }
}

void write_layer(std::ostream& out, const MlpFirstLayer& layer) {
  nlohmann::ordered_json header;
  header["format"] = kLayerFormat;
  header["hidden"] = layer.hidden();
  header["inputs"] = layer.inputs();
  out << header.dump() << '\n';
  for (std::size_t r = 0; r < layer.hidden(); ++r) {
    for (std::size_t c = 0; c < layer.inputs(); ++c) out << format_double(layer.weight(r, c)) << ',';
    out << format_double(layer.bias()[r]) << '\n';
  }
}

MlpFirstLayer read_layer(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("layer: empty input");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("layer: bad header: ") + e.what());
  }
  if (!header.is_object() || header.value("format", "") != kLayerFormat ||
      !header.contains("hidden") || !header.contains("inputs") ||
      !header["hidden"].is_number_unsigned() || !header["inputs"].is_number_unsigned()) {
    throw ValidationError("layer: header must carry format, hidden and inputs");
  }
  const auto hidden = header["hidden"].get<std::size_t>();
  const auto inputs = header["inputs"].get<std::size_t>();
  std::vector<double> weights;
  std::vector<double> bias;
  weights.reserve(hidden * inputs);
  std::size_t line_no = 1;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != inputs + 1) {
      throw ValidationError("layer line " + std::to_string(line_no) + ": expected " +
                            std::to_string(inputs + 1) + " fields");
    }
    for (std::size_t c = 0; c < inputs; ++c) weights.push_back(parse_double(fields[c], line_no));
    bias.push_back(parse_double(fields[inputs], line_no));
    ++rows;
  }
  if (rows != hidden) {
    throw ValidationError("layer: header says " + std::to_string(hidden) + " rows, found " +
                          std::to_string(rows));
  }
  return MlpFirstLayer(hidden, inputs, std::move(weights), std::move(bias));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path.string());
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("error writing " + path.string());
}

}  // namespace impmatch::io
