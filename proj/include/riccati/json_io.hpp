#pragma once

#include "riccati/contractive_analysis.hpp"
#include "riccati/graph_subspaces.hpp"
#include "riccati/instances.hpp"
#include "riccati/matrix_core.hpp"
#include "riccati/riccati_engine.hpp"
#include "riccati/subspace_geometry.hpp"
#include "riccati/types.hpp"

#include "json.hpp"

#include <string>
#include <string_view>

namespace riccati {

using Json = nlohmann::json;

/// JSON encodings. Complex scalars are two-element arrays [re, im]; a matrix
/// is {"rows", "cols", "data"} with data listing the entries row-major; a
/// subspace is {"ambient", "basis"}. The remaining encoders emit the report
/// shapes the CLI writes; they have no decoders because reports are outputs.
Json encode(const ComplexMatrix& m);
Json encode(const Subspace& s);
Json encode(const BlockOperator& b);
Json encode(const RiccatiSolution& sol);
Json encode(const CanonicalDecomposition& d);
Json encode(const GraphReport& rep);
Json encode(const ContractiveFamily& fam);
Json encode(const UniquenessReport& rep);
Json encode(const InstanceSpec& spec);
Json encode(const Instance& inst);

/// Structural decoders. Throw InvalidSpec naming the offending field when the
/// value does not match its schema; the block-operator decoder additionally
/// runs validate() (DimensionMismatch / NotHermitian on bad content).
ComplexMatrix decode_matrix(const Json& j);
Subspace decode_subspace(const Json& j);
BlockOperator decode_block(const Json& j, const TolerancePolicy& pol);
InstanceSpec decode_spec(const Json& j);

/// Canonical serialization: object keys sorted, floats printed with 17
/// significant digits, complex entries as [re, im]. Byte-identical for equal
/// values, so repeated runs diff clean. The result ends with a newline.
std::string canonical_dump(const Json& j);

/// Parse with position diagnostics: on a syntax error throws InvalidSpec with
/// the message prefixed "<origin>:<line>:<column>: ".
Json parse_text(const std::string& text, const std::string& origin);

/// Reads the whole file and delegates to parse_text (origin = path). Throws
/// InvalidSpec when the file cannot be read.
Json parse_file(const std::string& path);

/// FNV-1a 64-bit content digest, rendered as 16 hex digits. Used to fingerprint
/// inputs and outputs in run reports.
std::string digest_hex(std::string_view bytes);

} // namespace riccati
