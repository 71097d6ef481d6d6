#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "dts/dirac.hpp"
#include "dts/gbdt.hpp"
#include "dts/toeplitz.hpp"

namespace dts::io {

using Json = nlohmann::json;

/// A matrix is an array of rows; a complex scalar is [re, im] (a bare number is read
/// as a real scalar).
Json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j, const std::string& where);

/// {"p": int, "C": [matrix...]}
Json potential_to_json(Index p, const std::vector<CMatrix>& c);
Potential potential_from_json(const Json& j, const Tolerances& tol = {});

/// {"n": int, "p": int, "A": matrix, "S0": matrix, "theta1": matrix, "theta2": matrix}
Json triple_to_json(const AdmissibleTriple& t);
AdmissibleTriple triple_from_json(const Json& j, const Tolerances& tol = {});

/// {"p": int, "nu": matrix, "s": [matrix...]} with s[0] = s_0 and s[k] = s_{-k}.
Json moments_to_json(const MomentData& m);
MomentData moments_from_json(const Json& j, const Tolerances& tol = {});

/// Errc::Io when the file cannot be opened, Errc::Parse (with the byte offset) on
/// malformed JSON.
Json read_json(const std::string& path);
void write_json(const std::string& path, const Json& j);

}  // namespace dts::io
