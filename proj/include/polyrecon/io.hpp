#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "polyrecon/design.hpp"
#include "polyrecon/estimator.hpp"
#include "polyrecon/fan.hpp"
#include "polyrecon/sim.hpp"

namespace polyrecon {

inline constexpr const char* kFanFormat = "polyrecon-fan/1";
inline constexpr const char* kMeasurementFormat = "polyrecon-measurements/1";
inline constexpr const char* kRecordFormat = "polyrecon-records/1";
inline constexpr const char* kResultFormat = "polyrecon-result/1";
inline constexpr const char* kVersion = "1.0.0";

/// Malformed input file; line and column are 1-based, 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// `{ "format": ..., "dim": d, "rays": [[...]], "cells": [[...]] }`; "format" is optional on input.
SimplicialFan parse_fan(const std::string& text, const std::string& source = "<string>");
SimplicialFan read_fan(const std::string& path);
std::string fan_to_json(const SimplicialFan& fan);
void write_fan(const std::string& path, const SimplicialFan& fan);

/// Rows of d direction components then y, separated by commas, tabs or
/// spaces. '#' starts a comment; a leading non-numeric row is a header.
Dataset parse_measurements(const std::string& text, int dim, const std::string& source = "<string>");
Dataset read_measurements(const std::string& path, int dim);
void write_measurements(std::ostream& out, const Dataset& data);

/// %.17g rendering used by every text writer.
std::string format_double(double x);

/// With `timing` false the elapsed column is written as 0 so reruns diff clean.
void write_records(std::ostream& out, const std::vector<ConvergenceRecord>& records, bool timing);

struct RecordMetadata {
  std::string fan_source;
  double t = 0.0;
  double delta = 0.0;
  std::string plan;
  double sigma = 0.0;
  double eta = 0.05;
  int replicates = 0;
  std::vector<int> m_schedule;
  std::uint64_t seed = 0;
  std::uint64_t noise_seed = 0;
  double slope = 0.0;
};

std::string metadata_to_json(const RecordMetadata& meta);

std::string result_to_json(const Fan& fan, const ReconstructionResult& result);
std::string multi_result_to_json(const std::vector<Fan>& fans, const std::vector<std::string>& sources,
                                 const MultiFanResult& result);

/// Log-log plot of per-replicate errors, their medians and the median bound against m.
std::string convergence_svg(const std::vector<ConvergenceRecord>& records);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace polyrecon
