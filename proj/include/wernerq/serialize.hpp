#pragma once

// JSON documents for states, filters, certificates, measurements, assemblages
// and correlations; CSV plus JSON sidecar for counts. Doubles are written in
// shortest round-trip form, so every document reloads bit for bit.

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "wernerq/certify.hpp"
#include "wernerq/filterops.hpp"
#include "wernerq/steer.hpp"
#include "wernerq/tomo.hpp"

namespace wernerq {

using json = nlohmann::json;

// --- matrices -------------------------------------------------------------------------

/// Row-major [[re, im], ...].
inline json entries_to_json(const CMatrix& m) {
  json e = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) e.push_back({m(r, c).real(), m(r, c).imag()});
  return e;
}

inline CMatrix entries_from_json(const json& e, int rows, int cols) {
  if (!e.is_array() || static_cast<int>(e.size()) != rows * cols)
    throw DimensionError("entries_from_json: entry count does not match the shape");
  CMatrix m(rows, cols);
  for (int k = 0; k < rows * cols; ++k) {
    const json& z = e[k];
    if (!z.is_array() || z.size() != 2) throw DomainError("entries_from_json: entry is not [re, im]");
    m(k / cols, k % cols) = cplx(z[0].get<double>(), z[1].get<double>());
  }
  return m;
}

inline json matrix_to_json(const CMatrix& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries_to_json(m)}};
}

inline CMatrix matrix_from_json(const json& j) {
  return entries_from_json(j.at("entries"), j.at("rows").get<int>(), j.at("cols").get<int>());
}

// --- states and filters -------------------------------------------------------------------

inline json to_json(const DensityMatrix& rho) {
  return {{"dimA", rho.dim_a()}, {"dimB", rho.dim_b()}, {"entries", entries_to_json(rho.matrix())}};
}

inline DensityMatrix state_from_json(const json& j) {
  const int da = j.at("dimA").get<int>(), db = j.at("dimB").get<int>();
  return DensityMatrix(entries_from_json(j.at("entries"), da * db, da * db), da, db);
}

inline Side side_from_string(const std::string& s) {
  if (s == "A") return Side::A;
  if (s == "B") return Side::B;
  throw DomainError("side_from_string: expected A or B, got " + s);
}

inline json to_json(const FilterOperator& f) {
  json j = matrix_to_json(f.matrix());
  j["side"] = to_string(f.side());
  return j;
}

inline FilterOperator filter_from_json(const json& j) {
  return FilterOperator(matrix_from_json(j), side_from_string(j.at("side").get<std::string>()));
}

// --- certificates -----------------------------------------------------------------------

inline CertificateKind certificate_kind_from_string(const std::string& s) {
  for (CertificateKind k : {CertificateKind::Ppt, CertificateKind::OneDistillable,
                            CertificateKind::GurvitsBall, CertificateKind::Fef,
                            CertificateKind::Chsh, CertificateKind::DenseCoding})
    if (s == to_string(k)) return k;
  throw DomainError("unknown certificate name: " + s);
}

inline Verdict verdict_from_string(const std::string& s) {
  for (Verdict v : {Verdict::Pass, Verdict::Fail, Verdict::Inconclusive})
    if (s == to_string(v)) return v;
  throw DomainError("unknown verdict: " + s);
}

inline json to_json(const Certificate& c) {
  json j = {{"name", to_string(c.kind)},   {"value", c.value}, {"threshold", c.threshold},
            {"verdict", to_string(c.verdict)}, {"seed", c.seed}, {"restarts", c.restarts}};
  if (c.witness) {
    j["witness"] = matrix_to_json(*c.witness);
    j["witness"]["kind"] = c.witness_kind;
  }
  return j;
}

inline Certificate certificate_from_json(const json& j) {
  Certificate c;
  c.kind = certificate_kind_from_string(j.at("name").get<std::string>());
  c.value = j.at("value").get<double>();
  c.threshold = j.at("threshold").get<double>();
  c.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  c.seed = j.at("seed").get<std::uint64_t>();
  c.restarts = j.at("restarts").get<int>();
  if (j.contains("witness")) {
    c.witness = matrix_from_json(j["witness"]);
    c.witness_kind = j["witness"].value("kind", "");
  }
  return c;
}

// --- steering and Bell tables ---------------------------------------------------------------

namespace detail {

inline json table_to_json(const std::vector<std::vector<CMatrix>>& t) {
  json out = json::array();
  for (const auto& setting : t) {
    json row = json::array();
    for (const CMatrix& m : setting) row.push_back(entries_to_json(m));
    out.push_back(row);
  }
  return out;
}

inline std::vector<std::vector<CMatrix>> table_from_json(const json& j, int ns, int no, int d) {
  if (!j.is_array() || static_cast<int>(j.size()) != ns)
    throw DimensionError("table_from_json: setting count mismatch");
  std::vector<std::vector<CMatrix>> t;
  for (const json& row : j) {
    if (!row.is_array() || static_cast<int>(row.size()) != no)
      throw DimensionError("table_from_json: outcome count mismatch");
    std::vector<CMatrix> setting;
    for (const json& e : row) setting.push_back(entries_from_json(e, d, d));
    t.push_back(std::move(setting));
  }
  return t;
}

}  // namespace detail

/// {n_settings, n_outcomes, dim, effects[x][a]}.
inline json to_json(const MeasurementSet& m) {
  return {{"n_settings", m.n_settings}, {"n_outcomes", m.n_outcomes}, {"dim", m.dim()},
          {"effects", detail::table_to_json(m.effects)}};
}

inline MeasurementSet measurements_from_json(const json& j) {
  MeasurementSet m;
  m.n_settings = j.at("n_settings").get<int>();
  m.n_outcomes = j.at("n_outcomes").get<int>();
  m.effects = detail::table_from_json(j.at("effects"), m.n_settings, m.n_outcomes,
                                      j.at("dim").get<int>());
  m.validate();
  return m;
}

/// {n_settings, n_outcomes, dim, sigma[x][a]}.
inline json to_json(const Assemblage& a) {
  return {{"n_settings", a.n_settings}, {"n_outcomes", a.n_outcomes}, {"dim", a.dim()},
          {"sigma", detail::table_to_json(a.sigma)}};
}

inline Assemblage assemblage_from_json(const json& j) {
  Assemblage a;
  a.n_settings = j.at("n_settings").get<int>();
  a.n_outcomes = j.at("n_outcomes").get<int>();
  a.sigma = detail::table_from_json(j.at("sigma"), a.n_settings, a.n_outcomes,
                                    j.at("dim").get<int>());
  a.validate();
  return a;
}

/// {scenario: {n_sa, n_oa, n_sb, n_ob}, p: P[x][y][a][b]}.
inline json to_json(const Correlation& c) {
  json p = json::array();
  for (int x = 0; x < c.n_sa; ++x) {
    json px = json::array();
    for (int y = 0; y < c.n_sb; ++y) {
      json pxy = json::array();
      for (int a = 0; a < c.n_oa; ++a) {
        json row = json::array();
        for (int b = 0; b < c.n_ob; ++b) row.push_back(c(a, b, x, y));
        pxy.push_back(row);
      }
      px.push_back(pxy);
    }
    p.push_back(px);
  }
  return {{"scenario", {{"n_sa", c.n_sa}, {"n_oa", c.n_oa}, {"n_sb", c.n_sb}, {"n_ob", c.n_ob}}},
          {"p", p}};
}

inline Correlation correlation_from_json(const json& j) {
  const json& s = j.at("scenario");
  Correlation c(s.at("n_sa").get<int>(), s.at("n_oa").get<int>(), s.at("n_sb").get<int>(),
                s.at("n_ob").get<int>());
  const json& p = j.at("p");
  for (int x = 0; x < c.n_sa; ++x)
    for (int y = 0; y < c.n_sb; ++y)
      for (int a = 0; a < c.n_oa; ++a)
        for (int b = 0; b < c.n_ob; ++b) c(a, b, x, y) = p.at(x).at(y).at(a).at(b).get<double>();
  c.validate();
  return c;
}

// --- counts --------------------------------------------------------------------------------

inline std::string frame_name(const LocalFrame& f) {
  if (f.labels == qutrit_bases().labels) return "qutrit9";
  if (f.labels == qubit_frame().labels) return "qubit6";
  throw DomainError("frame_name: unknown frame");
}

inline LocalFrame frame_from_name(const std::string& name) {
  if (name == "qutrit9") return qutrit_bases();
  if (name == "qubit6") return qubit_frame();
  throw DomainError("frame_from_name: unknown frame " + name);
}

/// Header of frame labels, then one row of integers per first-party setting.
inline void write_counts_csv(std::ostream& os, const CountsRecord& c) {
  const int n = c.settings();
  for (int j = 0; j < n; ++j) os << (j ? "," : "") << c.frame.labels[j];
  os << '\n';
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) os << (j ? "," : "") << c.at(i, j);
    os << '\n';
  }
}

inline json counts_sidecar(const CountsRecord& c) {
  return {{"N", c.shots}, {"seed", c.seed}, {"state_tag", c.state_tag}, {"frame", frame_name(c.frame)}};
}

inline CountsRecord read_counts(std::istream& csv, const json& sidecar) {
  CountsRecord c;
  c.frame = frame_from_name(sidecar.at("frame").get<std::string>());
  c.shots = sidecar.at("N").get<std::int64_t>();
  c.seed = sidecar.at("seed").get<std::uint64_t>();
  c.state_tag = sidecar.at("state_tag").get<std::string>();
  const int n = c.settings();
  std::string line;
  if (!std::getline(csv, line)) throw DomainError("read_counts: missing header");
  {
    std::stringstream ss(line);
    std::string label;
    for (int j = 0; j < n; ++j) {
      if (!std::getline(ss, label, ',') || label != c.frame.labels[j])
        throw DomainError("read_counts: header does not match the frame labels");
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!std::getline(csv, line)) throw DomainError("read_counts: missing data row");
    std::stringstream ss(line);
    std::string cell;
    for (int j = 0; j < n; ++j) {
      if (!std::getline(ss, cell, ',')) throw DomainError("read_counts: short data row");
      std::size_t used = 0;
      const long long v = std::stoll(cell, &used);
      if (used != cell.size() || v < 0) throw DomainError("read_counts: invalid count " + cell);
      c.counts.push_back(v);
    }
  }
  return c;
}

}  // namespace wernerq
