#include "gaugecert/report.hpp"

#include <cstdio>

#include "json.hpp"

namespace gaugecert {

using nlohmann::json;

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

json q(const Rational& v) { return to_string(v); }

void put(json& j, const std::string& key, const Rational& v) {
  j[key] = to_string(v);
  j[key + "_approx"] = to_double(v);
}

json q_list(std::span<const Rational> v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(q(x));
  return out;
}

json bseq_list(std::span<const BSeq> bs) {
  json out = json::array();
  for (const auto& b : bs) out.push_back(format_bseq(b));
  return out;
}

json tri_j(const TriVector& x) {
  json out = json::array();
  for (const auto& [pt, v] : x.entries()) out.push_back(json::array({pt.i, pt.j, q(v)}));
  return out;
}

json ucert_j(const UCertificate& c) {
  json j;
  j["generators"] = bseq_list(c.generators);
  j["weights"] = q_list(c.weights);
  j["scale"] = q(c.scale);
  return j;
}

json rep_j(const ARepresentative& rep) {
  json j;
  j["pieces"] = json::array();
  j["certs"] = json::array();
  for (const auto& p : rep.pieces) j["pieces"].push_back(tri_j(p));
  for (const auto& c : rep.certs) j["certs"].push_back(ucert_j(c));
  j["rho_sq"] = q_list(rep.rho_sq);
  return j;
}

json vcert_j(const VCertificate& c) {
  json j;
  put(j, "scale", c.scale);
  j["weights"] = q_list(c.weights);
  j["reps"] = json::array();
  for (const auto& r : c.reps) j["reps"].push_back(rep_j(r));
  return j;
}

json decomposition_j(const DecompositionCertificate& c) {
  json j;
  j["generators"] = bseq_list(c.generators);
  put(j, "epsilon", c.epsilon);
  j["p"] = c.p.str();
  j["m"] = c.m;
  j["k"] = c.k;
  j["eta_lo"] = q(c.eta.lo);
  j["eta_hi"] = q(c.eta.hi);
  put(j, "eta_used", c.eta_used);
  j["breakpoints"] = c.breakpoints;
  j["blocks"] = json::array();
  for (const auto& b : c.blocks) {
    json bj;
    bj["first_col"] = b.first_col;
    bj["last_col"] = b.last_col;
    bj["mass"] = q(b.mass);
    bj["reductions"] = b.reductions;
    bj["pieces"] = bseq_list(b.pieces);
    put(bj, "rho_sq", b.rho_sq);
    j["blocks"].push_back(std::move(bj));
  }
  put(j, "scale", c.scale);
  return j;
}

json lower_j(const LowerWitness& w) {
  json j;
  j["kind"] = to_string(w.kind);
  put(j, "value", w.value);
  if (w.kind == LowerKind::SupNorm) j["point"] = json::array({w.point.i, w.point.j});
  if (w.kind == LowerKind::Pairing) j["b"] = q_list(w.b);
  if (w.kind == LowerKind::Dual) {
    j["dual"] = tri_j(w.dual);
    j["dual_bound"] = q(w.dual_bound);
  }
  return j;
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw PreconditionError(std::string("json: missing field '") + key + "'");
  return j.at(key);
}

Rational q_from(const json& j) {
  if (!j.is_string()) throw PreconditionError("json: rational must be a string");
  return parse_rational(j.get<std::string>());
}

std::vector<Rational> q_list_from(const json& j) {
  std::vector<Rational> out;
  for (const auto& e : j) out.push_back(q_from(e));
  return out;
}

std::vector<BSeq> bseq_list_from(const json& j) {
  std::vector<BSeq> out;
  for (const auto& e : j) out.push_back(parse_bseq(e.get<std::string>()));
  return out;
}

TriVector tri_from(const json& j) {
  TriVector x;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 3) throw PreconditionError("json: trivector entry must be [i, j, value]");
    x.set(e[0].get<std::int64_t>(), e[1].get<std::int64_t>(), q_from(e[2]));
  }
  return x;
}

UCertificate ucert_from(const json& j) {
  return {bseq_list_from(field(j, "generators")), q_list_from(field(j, "weights")), q_from(field(j, "scale"))};
}

ARepresentative rep_from(const json& j) {
  ARepresentative rep;
  for (const auto& p : field(j, "pieces")) rep.pieces.push_back(tri_from(p));
  for (const auto& c : field(j, "certs")) rep.certs.push_back(ucert_from(c));
  rep.rho_sq = q_list_from(field(j, "rho_sq"));
  return rep;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("json: ") + e.what());
  }
}

}  // namespace

std::string to_json(const TriVector& x) { return tri_j(x).dump(); }
std::string to_json(const UCertificate& c) { return ucert_j(c).dump(); }
std::string to_json(const ARepresentative& rep) { return rep_j(rep).dump(); }
std::string to_json(const VCertificate& c) { return vcert_j(c).dump(); }
std::string to_json(const DecompositionCertificate& c) { return decomposition_j(c).dump(); }

std::string to_json(const SplitResult& s) {
  json j;
  j["weights"] = q_list(s.weights);
  j["delta_sq_pow"] = q(s.delta_sq_pow);
  j["r"] = s.r;
  j["permutations"] = s.permutations;
  j["large_counts"] = s.large_counts;
  j["tails"] = json::array();
  for (const auto& t : s.tails) j["tails"].push_back(rep_j(t));
  j["u"] = tri_j(s.u);
  j["v"] = tri_j(s.v);
  j["v_parts"] = json::array();
  for (const auto& v : s.v_parts) j["v_parts"].push_back(tri_j(v));
  j["v_certs"] = json::array();
  for (const auto& c : s.v_certs) j["v_certs"].push_back(c ? decomposition_j(*c) : json(nullptr));
  j["v_bounds"] = q_list(s.v_bounds);
  put(j, "tau_v_bound", s.tau_v_bound);
  return j.dump();
}

std::string to_json(const GaugeInterval& g) {
  json j;
  put(j, "lo", g.lo);
  put(j, "hi", g.hi);
  j["lower"] = lower_j(g.lower);
  j["upper"] = vcert_j(g.upper);
  j["iterations"] = g.iterations;
  return j.dump();
}

std::string to_json(const UpperBound& u) {
  json j;
  put(j, "hi", u.hi);
  j["strategy"] = u.strategy;
  j["cert"] = vcert_j(u.cert);
  return j.dump();
}

std::string to_json(const LowerBound& l) {
  json j;
  put(j, "lo", l.lo);
  j["witness"] = lower_j(l.witness);
  return j.dump();
}

std::string to_json(const QuotientWitness& w) {
  json j;
  j["branch"] = w.branch;
  j["y"] = tri_j(w.y);
  put(j, "pairing", w.pairing);
  j["generator"] = format_bseq(w.generator);
  j["cert"] = vcert_j(w.cert);
  return j.dump();
}

DecompositionCertificate decomposition_from_json(const std::string& text) {
  const json j = parse_json(text);
  try {
    DecompositionCertificate c;
    c.generators = bseq_list_from(field(j, "generators"));
    c.epsilon = q_from(field(j, "epsilon"));
    c.p = LorentzParam::parse(field(j, "p").get<std::string>());
    c.m = field(j, "m").get<std::int64_t>();
    c.k = field(j, "k").get<std::int64_t>();
    c.eta = Interval(q_from(field(j, "eta_lo")), q_from(field(j, "eta_hi")));
    c.eta_used = q_from(field(j, "eta_used"));
    c.breakpoints = field(j, "breakpoints").get<std::vector<std::int64_t>>();
    for (const auto& bj : field(j, "blocks")) {
      DecompositionBlock b;
      b.first_col = field(bj, "first_col").get<std::int64_t>();
      b.last_col = field(bj, "last_col").get<std::int64_t>();
      b.mass = q_from(field(bj, "mass"));
      b.reductions = field(bj, "reductions").get<std::int64_t>();
      b.pieces = bseq_list_from(field(bj, "pieces"));
      b.rho_sq = q_from(field(bj, "rho_sq"));
      c.blocks.push_back(std::move(b));
    }
    c.scale = q_from(field(j, "scale"));
    return c;
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("json: ") + e.what());
  }
}

VCertificate vcertificate_from_json(const std::string& text) {
  const json j = parse_json(text);
  try {
    VCertificate c;
    c.scale = q_from(field(j, "scale"));
    c.weights = q_list_from(field(j, "weights"));
    for (const auto& r : field(j, "reps")) c.reps.push_back(rep_from(r));
    return c;
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("json: ") + e.what());
  }
}

}  // namespace gaugecert
