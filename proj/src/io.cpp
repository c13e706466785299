#include "polyrecon/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "polyrecon/random.hpp"

namespace polyrecon {

using nlohmann::json;

namespace {

std::string locate(const std::string& source, int line, int column, const std::string& message) {
  std::string out = source;
  if (line > 0) out += ":" + std::to_string(line) + ":" + std::to_string(column);
  return out + ": " + message;
}

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

json vec_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json mat_json(const Mat& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vec_json(m.row(i).transpose()));
  return a;
}

bool parse_number(const std::string& token, double& out) {
  if (token.empty()) return false;
  char* end = nullptr;
  out = std::strtod(token.c_str(), &end);
  return end == token.c_str() + token.size();
}

struct Token {
  std::string text;
  int column;
};

std::vector<Token> split_fields(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ',' || line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ',' && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return out;
}

json uniqueness_json(const UniquenessReport& u) {
  json cells = json::array();
  for (bool c : u.cells_covered) cells.push_back(c);
  return {{"numeric_rank", u.numeric_rank},
          {"matching_size", u.matching_size},
          {"cells_covered", cells},
          {"unique_for_all_y", u.unique_for_all_y},
          {"kernel_basis", mat_json(u.kernel_basis.transpose())}};
}

json solution_set_json(const SolutionSetDescription& s) {
  json out = {{"dimension", s.dimension}, {"bounded", s.bounded}};
  if (s.segment_endpoints) {
    out["segment_endpoints"] = {vec_json(s.segment_endpoints->first), vec_json(s.segment_endpoints->second)};
  }
  return out;
}

json reconstruction_json(const Fan& fan, const ReconstructionResult& r) {
  const DeformationCone cone(fan);
  json verts = json::array();
  for (const Vec& x : vertices(cone, r.h_hat).distinct()) verts.push_back(vec_json(x));
  return {{"h_hat", vec_json(r.h_hat)},
          {"objective", r.objective},
          {"y_hat", vec_json(r.y_hat)},
          {"vertices", verts},
          {"uniqueness", uniqueness_json(r.uniqueness)},
          {"solution_set", solution_set_json(r.solution_set)},
          {"qp", {{"iterations", r.qp.iterations}, {"kkt_residual", r.qp.kkt_residual}}}};
}

}  // namespace

ParseError::ParseError(const std::string& source, int line, int column, const std::string& message)
    : Error(locate(source, line, column, message)), line_(line), column_(column) {}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << text;
}

SimplicialFan parse_fan(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    std::string msg = e.what();
    const auto pos = msg.find("error: ");
    throw ParseError(source, line, col, pos == std::string::npos ? msg : msg.substr(pos + 7));
  }
  auto fail = [&](const std::string& msg) -> ParseError { return ParseError(source, 0, 0, msg); };
  if (!doc.is_object()) throw fail("top level must be an object");
  if (doc.contains("format") && doc["format"] != kFanFormat)
    throw fail("unsupported format " + doc["format"].dump() + ", expected \"" + kFanFormat + "\"");
  for (const char* key : {"dim", "rays", "cells"})
    if (!doc.contains(key)) throw fail(std::string("missing key \"") + key + "\"");
  if (!doc["dim"].is_number_integer() || doc["dim"].get<int>() < 1) throw fail("\"dim\" must be a positive integer");

  SimplicialFan fan;
  fan.dim = doc["dim"].get<int>();
  if (!doc["rays"].is_array()) throw fail("\"rays\" must be an array");
  for (std::size_t i = 0; i < doc["rays"].size(); ++i) {
    const json& r = doc["rays"][i];
    if (!r.is_array() || r.size() != static_cast<std::size_t>(fan.dim))
      throw fail("rays[" + std::to_string(i) + "] must be an array of " + std::to_string(fan.dim) + " numbers");
    Vec v(fan.dim);
    for (int k = 0; k < fan.dim; ++k) {
      if (!r[k].is_number()) throw fail("rays[" + std::to_string(i) + "][" + std::to_string(k) + "] is not a number");
      v(k) = r[k].get<double>();
    }
    fan.rays.push_back(v);
  }
  if (!doc["cells"].is_array()) throw fail("\"cells\" must be an array");
  for (std::size_t j = 0; j < doc["cells"].size(); ++j) {
    const json& c = doc["cells"][j];
    if (!c.is_array()) throw fail("cells[" + std::to_string(j) + "] must be an array of ray indices");
    std::vector<int> cell;
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (!c[k].is_number_integer())
        throw fail("cells[" + std::to_string(j) + "][" + std::to_string(k) + "] is not an integer");
      cell.push_back(c[k].get<int>());
    }
    fan.cells.push_back(cell);
  }
  return fan;
}

SimplicialFan read_fan(const std::string& path) { return parse_fan(read_text_file(path), path); }

std::string fan_to_json(const SimplicialFan& fan) {
  json rays = json::array();
  for (const Vec& r : fan.rays) rays.push_back(vec_json(r));
  json doc = {{"format", kFanFormat}, {"dim", fan.dim}, {"rays", rays}, {"cells", fan.cells}};
  return doc.dump(2) + "\n";
}

void write_fan(const std::string& path, const SimplicialFan& fan) { write_text_file(path, fan_to_json(fan)); }

Dataset parse_measurements(const std::string& text, int dim, const std::string& source) {
  Dataset data;
  std::vector<double> values;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool seen_row = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::vector<Token> fields = split_fields(line);
    if (fields.empty()) continue;
    std::vector<double> nums(fields.size());
    int bad = -1;
    for (std::size_t k = 0; k < fields.size() && bad < 0; ++k)
      if (!parse_number(fields[k].text, nums[k])) bad = static_cast<int>(k);
    if (bad >= 0) {
      if (!seen_row && data.directions.empty() && values.empty()) {
        seen_row = true;
        continue;
      }
      throw ParseError(source, lineno, fields[bad].column, "field \"" + fields[bad].text + "\" is not a number");
    }
    seen_row = true;
    if (static_cast<int>(fields.size()) != dim + 1)
      throw ParseError(source, lineno, 1,
                       "expected " + std::to_string(dim + 1) + " fields, found " + std::to_string(fields.size()));
    Vec u(dim);
    for (int k = 0; k < dim; ++k) u(k) = nums[k];
    if (!(u.norm() > 0.0)) throw ParseError(source, lineno, 1, "direction is zero");
    data.directions.push_back(u);
    values.push_back(nums[dim]);
  }
  if (data.directions.empty()) throw ParseError(source, 0, 0, "no data rows");
  data.values = Eigen::Map<Vec>(values.data(), static_cast<Eigen::Index>(values.size()));
  return data;
}

Dataset read_measurements(const std::string& path, int dim) {
  return parse_measurements(read_text_file(path), dim, path);
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_measurements(std::ostream& out, const Dataset& data) {
  out << "# format: " << kMeasurementFormat << "\n";
  for (int i = 0; i < data.size(); ++i) {
    for (Eigen::Index k = 0; k < data.directions[i].size(); ++k) out << format_double(data.directions[i](k)) << ",";
    out << format_double(data.values(i)) << "\n";
  }
}

void write_records(std::ostream& out, const std::vector<ConvergenceRecord>& records, bool timing) {
  out << "# format: " << kRecordFormat << "\n";
  out << "m,replicate,hausdorff_error,objective,elapsed,bound,status\n";
  for (const auto& r : records) {
    out << r.m << "," << r.replicate << "," << format_double(r.hausdorff_error) << "," << format_double(r.objective)
        << "," << format_double(timing ? r.elapsed : 0.0) << "," << format_double(r.bound) << ","
        << (r.failed ? "failed" : "ok") << "\n";
  }
}

std::string metadata_to_json(const RecordMetadata& meta) {
  json doc = {{"format", kRecordFormat},
              {"library_version", kVersion},
              {"generator", Rng::kAlgorithm},
              {"fan", meta.fan_source},
              {"plan", {{"kind", meta.plan}, {"t", meta.t}, {"delta", meta.delta}}},
              {"noise", {{"sigma", meta.sigma}, {"seed", meta.noise_seed}}},
              {"eta", meta.eta},
              {"replicates", meta.replicates},
              {"m_schedule", meta.m_schedule},
              {"seed", meta.seed},
              {"slope", meta.slope}};
  return doc.dump(2) + "\n";
}

std::string result_to_json(const Fan& fan, const ReconstructionResult& result) {
  json doc = reconstruction_json(fan, result);
  doc["format"] = kResultFormat;
  return doc.dump(2) + "\n";
}

std::string multi_result_to_json(const std::vector<Fan>& fans, const std::vector<std::string>& sources,
                                 const MultiFanResult& result) {
  json per = json::array();
  for (std::size_t f = 0; f < fans.size(); ++f) {
    json entry = {{"fan", f < sources.size() ? sources[f] : std::to_string(f)}};
    if (result.per_fan[f].result)
      entry["result"] = reconstruction_json(fans[f], *result.per_fan[f].result);
    else
      entry["error"] = result.per_fan[f].error;
    per.push_back(entry);
  }
  json doc = {{"format", kResultFormat},
              {"fans", per},
              {"min_objective", result.min_objective},
              {"tie_tol", result.tie_tol},
              {"minimizers", result.minimizers},
              {"tie", result.tie()}};
  return doc.dump(2) + "\n";
}

std::string convergence_svg(const std::vector<ConvergenceRecord>& records) {
  const RateSummary s = summarize(records);
  const double W = 640, H = 420, left = 70, right = 20, top = 20, bottom = 50;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  auto extend_y = [&](double y) {
    if (y > 0 && std::isfinite(y)) {
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  };
  for (const auto& r : records) {
    if (r.failed) continue;
    xmin = std::min(xmin, std::log10(static_cast<double>(r.m)));
    xmax = std::max(xmax, std::log10(static_cast<double>(r.m)));
    extend_y(r.hausdorff_error);
    extend_y(r.bound);
  }
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!(xmax >= xmin) || !(ymax >= ymin)) {
    svg << "<text x=\"20\" y=\"40\">no data</text>\n</svg>\n";
    return svg.str();
  }
  const double lx0 = xmin - 0.1, lx1 = xmax + 0.1;
  const double ly0 = std::floor(std::log10(ymin)), ly1 = std::ceil(std::log10(ymax));
  auto px = [&](double m) { return left + (std::log10(m) - lx0) / (lx1 - lx0) * (W - left - right); };
  auto py = [&](double y) { return top + (ly1 - std::log10(y)) / std::max(ly1 - ly0, 1.0) * (H - top - bottom); };

  svg << "<line x1=\"" << left << "\" y1=\"" << H - bottom << "\" x2=\"" << W - right << "\" y2=\"" << H - bottom
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << H - bottom
      << "\" stroke=\"black\"/>\n";
  for (int e = static_cast<int>(ly0); e <= static_cast<int>(ly1); ++e) {
    const double y = py(std::pow(10.0, e));
    svg << "<text x=\"" << left - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\" font-size=\"12\">1e" << e
        << "</text>\n";
  }
  for (int m : s.m) {
    svg << "<text x=\"" << px(m) << "\" y=\"" << H - bottom + 18 << "\" text-anchor=\"middle\" font-size=\"12\">" << m
        << "</text>\n";
  }
  svg << "<text x=\"" << (W + left) / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">m</text>\n";
  svg << "<text x=\"16\" y=\"" << (H - bottom) / 2 << "\" transform=\"rotate(-90 16 " << (H - bottom) / 2
      << ")\" text-anchor=\"middle\">Hausdorff error</text>\n";

  for (const auto& r : records) {
    if (r.failed || !(r.hausdorff_error > 0)) continue;
    svg << "<circle cx=\"" << px(r.m) << "\" cy=\"" << py(r.hausdorff_error)
        << "\" r=\"2\" fill=\"steelblue\" fill-opacity=\"0.5\"/>\n";
  }
  auto polyline = [&](const std::vector<double>& ys, const char* style) {
    std::ostringstream pts;
    for (std::size_t k = 0; k < s.m.size(); ++k)
      if (ys[k] > 0 && std::isfinite(ys[k])) pts << px(s.m[k]) << "," << py(ys[k]) << " ";
    svg << "<polyline points=\"" << pts.str() << "\" fill=\"none\" " << style << "/>\n";
  };
  polyline(s.median_error, "stroke=\"black\" stroke-width=\"2\"");
  polyline(s.median_bound, "stroke=\"firebrick\" stroke-dasharray=\"6,4\"");
  char slope[64];
  std::snprintf(slope, sizeof slope, "slope %.3f", s.slope);
  svg << "<text x=\"" << W - right - 10 << "\" y=\"" << top + 16 << "\" text-anchor=\"end\">" << slope
      << "</text>\n</svg>\n";
  return svg.str();
}

}  // namespace polyrecon
