#include "dts/io.hpp"

#include <fstream>
#include <sstream>

namespace dts::io {

namespace {

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw Error(Errc::Parse, where + ": expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) throw Error(Errc::Parse, where + ": missing key \"" + key + "\"");
  return *it;
}

Index int_field(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_number_integer()) throw Error(Errc::Parse, where + "." + key + ": expected an integer");
  return v.get<Index>();
}

Complex scalar_from_json(const Json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw Error(Errc::Parse, where + ": a complex scalar must be [re, im]");
}

std::vector<CMatrix> matrix_list(const Json& j, const std::string& where) {
  if (!j.is_array()) throw Error(Errc::Parse, where + ": expected an array of matrices");
  std::vector<CMatrix> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    out.push_back(matrix_from_json(j[k], where + "[" + std::to_string(k) + "]"));
  }
  return out;
}

void expect_shape(const CMatrix& m, Index rows, Index cols, const std::string& where) {
  if (m.rows() != rows || m.cols() != cols) {
    std::ostringstream os;
    os << where << ": expected " << rows << " x " << cols << ", got " << m.rows() << " x "
       << m.cols();
    throw Error(Errc::ShapeMismatch, os.str());
  }
}

}  // namespace

Json matrix_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty()) {
    throw Error(Errc::Parse, where + ": a matrix must be a non-empty array of rows");
  }
  const auto rows = static_cast<Index>(j.size());
  const auto cols = static_cast<Index>(j[0].size());
  CMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw Error(Errc::Parse, where + ": rows have different lengths");
    }
    for (Index k = 0; k < cols; ++k) {
      m(i, k) = scalar_from_json(row[static_cast<std::size_t>(k)],
                                 where + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
    }
  }
  require_finite(m, where);
  return m;
}

Json potential_to_json(Index p, const std::vector<CMatrix>& c) {
  Json blocks = Json::array();
  for (const auto& m : c) blocks.push_back(matrix_to_json(m));
  return Json{{"p", p}, {"C", std::move(blocks)}};
}

Potential potential_from_json(const Json& j, const Tolerances& tol) {
  const Index p = int_field(j, "p", "potential");
  auto c = matrix_list(field(j, "C", "potential"), "potential.C");
  return validate_potential(p, std::move(c), tol);
}

Json triple_to_json(const AdmissibleTriple& t) {
  return Json{{"n", t.n()},
              {"p", t.p()},
              {"A", matrix_to_json(t.a())},
              {"S0", matrix_to_json(t.s0())},
              {"theta1", matrix_to_json(t.theta1())},
              {"theta2", matrix_to_json(t.theta2())}};
}

AdmissibleTriple triple_from_json(const Json& j, const Tolerances& tol) {
  const Index n = int_field(j, "n", "triple");
  const Index p = int_field(j, "p", "triple");
  CMatrix a = matrix_from_json(field(j, "A", "triple"), "triple.A");
  CMatrix s0 = matrix_from_json(field(j, "S0", "triple"), "triple.S0");
  CMatrix t1 = matrix_from_json(field(j, "theta1", "triple"), "triple.theta1");
  CMatrix t2 = matrix_from_json(field(j, "theta2", "triple"), "triple.theta2");
  expect_shape(a, n, n, "triple.A");
  expect_shape(s0, n, n, "triple.S0");
  expect_shape(t1, n, p, "triple.theta1");
  expect_shape(t2, n, p, "triple.theta2");
  return validate_triple(std::move(a), std::move(s0), std::move(t1), std::move(t2), tol);
}

Json moments_to_json(const MomentData& m) {
  Json s = Json::array();
  for (const auto& b : m.s) s.push_back(matrix_to_json(b));
  return Json{{"p", m.p}, {"nu", matrix_to_json(m.nu)}, {"s", std::move(s)}};
}

MomentData moments_from_json(const Json& j, const Tolerances& tol) {
  MomentData m;
  m.p = int_field(j, "p", "moments");
  m.nu = matrix_from_json(field(j, "nu", "moments"), "moments.nu");
  m.s = matrix_list(field(j, "s", "moments"), "moments.s");
  validate_moments(m, tol);
  return m;
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open '" + path + "' for reading");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    std::ostringstream os;
    os << path << ": JSON parse error at byte " << e.byte << ": " << e.what();
    throw Error(Errc::Parse, os.str(), static_cast<std::int64_t>(e.byte));
  }
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::Io, "cannot open '" + path + "' for writing");
  out << j.dump(1) << '\n';
  if (!out) throw Error(Errc::Io, "write to '" + path + "' failed");
}

}  // namespace dts::io
