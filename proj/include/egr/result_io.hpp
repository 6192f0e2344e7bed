#ifndef EGR_RESULT_IO_HPP
#define EGR_RESULT_IO_HPP

#include <filesystem>
#include <string>

#include "egr/certify.hpp"
#include "egr/eopt.hpp"
#include "egr/extract.hpp"

namespace egr {

/// Shortest-width formatting at 17 significant digits; deterministic.
std::string format_double(double v);

std::string certificate_to_json(const CertificateReport& report, int indent = 0);

// Result document schema:
//   {"sense", "lambda_star", "w": [..], "zero_weight_edges": [..], "d",
//    "X": [[..]], "total_variance", "certificate": {..}, "solver_trace": [..]}
// zero_weight_edges holds indices into the sorted edge list. Byte-identical
// across runs for fixed inputs and options.
std::string result_to_json(const OptResult& result, const Realization& realization,
                           const CertificateReport& certificate);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace egr

#endif
