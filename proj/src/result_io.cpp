#include "egr/result_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "egr/error.hpp"

namespace egr {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  out += "\"";
  return out;
}

const char* sense_name(Sense s) { return s == Sense::max_lambda2 ? "max-lambda2" : "min-lambdan"; }

}  // namespace

std::string certificate_to_json(const CertificateReport& report, int indent) {
  const std::string pad(indent, ' ');
  std::ostringstream out;
  out << "{\n"
      << pad << "  \"sense\": \"" << (report.sense == Sense::max_lambda2 ? "max" : "min")
      << "\",\n"
      << pad << "  \"overall\": " << (report.overall ? "true" : "false") << ",\n"
      << pad << "  \"conditions\": [\n";
  for (size_t i = 0; i < report.conditions.size(); ++i) {
    const auto& c = report.conditions[i];
    out << pad << "    {\"name\": " << json_string(c.name)
        << ", \"residual\": " << format_double(c.residual)
        << ", \"tolerance\": " << format_double(c.tolerance)
        << ", \"pass\": " << (c.pass ? "true" : "false") << "}";
    out << (i + 1 < report.conditions.size() ? ",\n" : "\n");
  }
  out << pad << "  ]\n" << pad << "}";
  return out.str();
}

std::string result_to_json(const OptResult& result, const Realization& realization,
                           const CertificateReport& certificate) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"sense\": \"" << sense_name(result.sense) << "\",\n";
  out << "  \"lambda_star\": " << format_double(result.lambda_star) << ",\n";

  out << "  \"w\": [";
  for (int k = 0; k < result.w_star.size(); ++k) {
    if (k) out << ", ";
    out << format_double(result.w_star[k]);
  }
  out << "],\n";

  out << "  \"zero_weight_edges\": [";
  bool first = true;
  for (int k = 0; k < result.w_star.size(); ++k) {
    if (result.w_star[k] == 0.0) {
      if (!first) out << ", ";
      out << k;
      first = false;
    }
  }
  out << "],\n";

  out << "  \"d\": " << realization.x.cols() << ",\n";
  out << "  \"X\": [\n";
  for (int i = 0; i < realization.x.rows(); ++i) {
    out << "    [";
    for (int c = 0; c < realization.x.cols(); ++c) {
      if (c) out << ", ";
      out << format_double(realization.x(i, c));
    }
    out << (i + 1 < realization.x.rows() ? "],\n" : "]\n");
  }
  out << "  ],\n";

  out << "  \"total_variance\": " << format_double(realization.total_variance()) << ",\n";
  out << "  \"certificate\": " << certificate_to_json(certificate, 2) << ",\n";

  out << "  \"solver_trace\": [\n";
  for (size_t i = 0; i < result.trace.size(); ++i) {
    const auto& e = result.trace[i];
    out << "    {\"t\": " << format_double(e.t) << ", \"mu\": " << format_double(e.mu)
        << ", \"newton_steps\": " << e.newton_steps
        << ", \"margin\": " << format_double(e.eig_margin) << "}";
    out << (i + 1 < result.trace.size() ? ",\n" : "\n");
  }
  out << "  ]\n}\n";
  return out.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error(Errc::IoError, "short write to " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace egr
