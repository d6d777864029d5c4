#pragma once

// JSON schemas for states, channels, measurements, quasi-POVMs, representation
// matrices and law reports. Every document has a "type" tag. Complex matrices are
// {"rows", "cols", "data": [[re, im], ...]} in row-major order; real matrices are
// nested row arrays. Parse errors raise SchemaError with a JSONPath-like location.

#include <string>

#include <json.hpp>

#include "qstoch/povm.hpp"
#include "qstoch/quantum.hpp"
#include "qstoch/representation.hpp"
#include "qstoch/verify.hpp"

namespace qstoch::io {

using json = nlohmann::json;

json to_json(const ComplexMatrix& m);
json to_json(const RealMatrix& m);
json to_json(const State& rho);
json to_json(const Channel& phi);
json to_json(const Measurement& meas);
json to_json(const QuasiPovm& povm);
json to_json(const QRep& rep);
json to_json(const LawReport& report);
json to_json(const DichotomyVerdict& verdict);

ComplexMatrix complex_matrix_from_json(const json& j, const std::string& path = "$");
RealMatrix real_matrix_from_json(const json& j, const std::string& path = "$");
State state_from_json(const json& j, const std::string& path = "$");
Channel channel_from_json(const json& j, const std::string& path = "$");
Measurement measurement_from_json(const json& j, const std::string& path = "$");
/// Flags and id, when present, must agree with the values recomputed from the effects.
QuasiPovm povm_from_json(const json& j, const std::string& path = "$");
QRep qrep_from_json(const json& j, const std::string& path = "$");

/// The "type" tag of a document; SchemaError if missing.
std::string document_type(const json& j, const std::string& path = "$");

/// Throws SchemaError (path = file name) on I/O or syntax errors.
json read_file(const std::string& filename);
void write_file(const std::string& filename, const json& j);

/// Two-space indented text with a trailing newline.
std::string dump(const json& j);

}  // namespace qstoch::io
