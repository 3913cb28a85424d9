#include <charconv>
#include <fstream>
#include <string>

#include "pcd/dataset.hpp"
#include "pcd/errors.hpp"
#include "pcd/trace.hpp"

namespace pcd {

namespace {

constexpr const char* kHeader = "iter,elapsed_ns,objective,suboptimality,grad_inf_norm";

std::int64_t parse_int_field(const std::string& field, std::int64_t line) {
  std::int64_t out = 0;
  const char* b = field.data();
  const char* e = b + field.size();
  auto [ptr, ec] = std::from_chars(b, e, out);
  if (ec != std::errc{} || ptr != e) {
    throw ParseError(line, "bad integer field '" + field + "'");
  }
  return out;
}

double parse_double_field(const std::string& field, std::int64_t line) {
  double out = 0.0;
  const char* b = field.data();
  const char* e = b + field.size();
  auto [ptr, ec] = std::from_chars(b, e, out);
  if (ec != std::errc{} || ptr != e) {
    throw ParseError(line, "bad numeric field '" + field + "'");
  }
  return out;
}

}  // namespace

void write_trace_csv(const Trace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << kHeader << '\n';
  for (const TraceRow& row : trace) {
    out << row.iter << ',' << row.elapsed_ns << ',' << format_double(row.objective)
        << ',';
    if (row.suboptimality) out << format_double(*row.suboptimality);
    out << ',';
    if (row.grad_inf_norm) out << format_double(*row.grad_inf_norm);
    out << '\n';
  }
  if (!out.flush()) throw IoError("failed writing " + path.string());
}

Trace read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  Trace trace;
  std::string line;
  std::int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1) {
      if (line != kHeader) throw ParseError(1, "unexpected header '" + line + "'");
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t pos = line.find(',', start);
      if (pos == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, pos - start));
      start = pos + 1;
    }
    if (fields.size() != 5) {
      throw ParseError(lineno, "expected 5 fields, got " + std::to_string(fields.size()));
    }
    TraceRow row;
    row.iter = parse_int_field(fields[0], lineno);
    row.elapsed_ns = parse_int_field(fields[1], lineno);
    row.objective = parse_double_field(fields[2], lineno);
    if (!fields[3].empty()) row.suboptimality = parse_double_field(fields[3], lineno);
    if (!fields[4].empty()) row.grad_inf_norm = parse_double_field(fields[4], lineno);
    trace.push_back(row);
  }
  return trace;
}

}  // namespace pcd
