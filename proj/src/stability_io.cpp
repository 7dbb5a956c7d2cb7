#include "csck/stability_io.hpp"

#include "csck/error.hpp"
#include "csck/format.hpp"

#include "toml.hpp"

#include <algorithm>
#include <numeric>

namespace csck {

namespace {

Rational rational_field(const nlohmann::json& v) {
  if (!v.is_string()) throw Error(ErrorKind::BadDocument, "expected a rational string such as \"1/2\", got " + v.dump());
  return parse_rational(v.get<std::string>());
}

nlohmann::json rvec_json(const RVec& v) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

std::string rvec_text(const RVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + to_string(v[i]);
  return s + ")";
}

Rational toml_rational(const toml::node& n, const std::string& where) {
  if (auto s = n.value<std::string>()) return parse_rational(*s);
  if (n.is_integer()) return Rational(n.value<int64_t>().value());
  throw Error(ErrorKind::BadDocument, where + ": rationals must be integers or strings like \"1/4\"");
}

RVec toml_rvec(const toml::node& n, const std::string& where) {
  const auto* arr = n.as_array();
  if (!arr) throw Error(ErrorKind::BadDocument, where + ": expected an array");
  RVec out;
  for (const auto& x : *arr) out.push_back(toml_rational(x, where));
  return out;
}

std::vector<Rational> toml_offsets(const toml::node& n, const std::string& where) {
  if (n.is_array()) return toml_rvec(n, where);
  const auto* t = n.as_table();
  if (!t || !t->contains("start") || !t->contains("stop") || !t->contains("step"))
    throw Error(ErrorKind::BadDocument, where + ": offsets must be a list or {start, stop, step}");
  const Rational start = toml_rational(*t->get("start"), where);
  const Rational stop = toml_rational(*t->get("stop"), where);
  const Rational step = toml_rational(*t->get("step"), where);
  if (step <= 0) throw Error(ErrorKind::BadDocument, where + ": step must be positive");
  std::vector<Rational> out;
  for (Rational c = start; c <= stop; c += step) out.push_back(c);
  return out;
}

}  // namespace

PLConvexFn pl_from_json(const nlohmann::json& doc) {
  try {
    std::vector<AffinePiece> pieces;
    for (const auto& p : doc.at("pieces")) {
      AffinePiece piece;
      for (const auto& x : p.at("a")) piece.a.push_back(rational_field(x));
      piece.b = rational_field(p.at("b"));
      pieces.push_back(std::move(piece));
    }
    return PLConvexFn(std::move(pieces));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::BadDocument, std::string("PL function document: ") + e.what());
  }
}

nlohmann::json pl_to_json(const PLConvexFn& f) {
  nlohmann::json pieces = nlohmann::json::array();
  for (const auto& p : f.pieces()) pieces.push_back({{"a", rvec_json(p.a)}, {"b", to_string(p.b)}});
  return {{"pieces", pieces}};
}

ScanSpec scan_spec_from_toml(std::string_view text) {
  toml::table tbl;
  try {
    tbl = toml::parse(text);
  } catch (const toml::parse_error& e) {
    throw Error(ErrorKind::BadDocument, std::string("scan spec: ") + std::string(e.description()));
  }
  ScanSpec spec;
  if (auto c = tbl["criterion"].value<std::string>()) spec.criterion = criterion_from_string(*c);
  spec.family.include_pairs = tbl["pairs"].value_or(false);
  if (auto* dirs = tbl["directions"].as_array()) {
    if (!tbl.contains("offsets")) throw Error(ErrorKind::BadDocument, "scan spec: 'directions' needs 'offsets'");
    const auto offsets = toml_offsets(*tbl.get("offsets"), "offsets");
    for (const auto& d : *dirs) spec.family.directions.push_back({toml_rvec(d, "directions"), offsets});
  }
  if (auto* list = tbl["direction"].as_array()) {
    for (const auto& entry : *list) {
      const auto* t = entry.as_table();
      if (!t || !t->contains("a") || !t->contains("offsets"))
        throw Error(ErrorKind::BadDocument, "scan spec: each [[direction]] needs 'a' and 'offsets'");
      spec.family.directions.push_back({toml_rvec(*t->get("a"), "direction.a"), toml_offsets(*t->get("offsets"), "direction.offsets")});
    }
  }
  if (spec.family.directions.empty()) throw Error(ErrorKind::EmptyFamily, "scan spec lists no directions");
  return spec;
}

nlohmann::json report_to_json(const StabilityReport& r) {
  nlohmann::json witness = nlohmann::json::array();
  for (const auto& c : r.witness_creases) witness.push_back({{"direction", rvec_json(c.a)}, {"offset", to_string(c.c)}});
  nlohmann::json out = {
      {"criterion", to_string(r.criterion)},
      {"min_value", to_string(r.min_value)},
      {"min_value_float", to_double(r.min_value)},
      {"witness", pl_to_json(r.witness)},
      {"witness_creases", witness},
      {"scan_size", r.scan_size},
      {"skipped", r.skipped},
  };
  if (r.margin) {
    out["margin"] = to_string(*r.margin);
    out["margin_float"] = to_double(*r.margin);
  }
  return out;
}

std::string report_csv(const StabilityReport& r, bool sort_by_lp) {
  std::vector<std::size_t> order(r.rows.size());
  std::iota(order.begin(), order.end(), 0);
  if (sort_by_lp) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return r.rows[a].lp < r.rows[b].lp; });
  }
  std::string out = csv_line({"direction", "offset", "L_P", "int_abs_ftilde", "ratio"});
  for (auto i : order) {
    const auto& row = r.rows[i];
    std::string dir, off;
    for (std::size_t k = 0; k < row.creases.size(); ++k) {
      dir += (k ? "+" : "") + rvec_text(row.creases[k].a);
      off += (k ? "+" : "") + to_string(row.creases[k].c);
    }
    out += csv_line({dir, off, to_string(row.lp), to_string(row.abs_tilde), row.ratio ? to_string(*row.ratio) : "nan"});
  }
  return out;
}

}  // namespace csck
