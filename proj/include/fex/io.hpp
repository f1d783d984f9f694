#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fex/certificate.hpp"
#include "fex/lp.hpp"
#include "fex/measure.hpp"

namespace fex {

/// Decimal with 17 significant digits; round-trips any double exactly.
inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Minimal ordered JSON emitter with fixed 17-significant-digit reals.
/// nlohmann/json is used for parsing; emission stays byte-deterministic.
class JsonWriter {
 public:
  JsonWriter& begin_object() { open('{'); return *this; }
  JsonWriter& end_object() { close('}'); return *this; }
  JsonWriter& begin_array() { open('['); return *this; }
  JsonWriter& end_array() { close(']'); return *this; }

  JsonWriter& key(const std::string& k) {
    comma();
    out_ += '"';
    out_ += k;
    out_ += "\":";
    pending_ = false;
    return *this;
  }

  JsonWriter& value(double v) { comma(); out_ += format_real(v); return *this; }
  JsonWriter& value(int v) { comma(); out_ += std::to_string(v); return *this; }
  JsonWriter& value(long v) { comma(); out_ += std::to_string(v); return *this; }
  JsonWriter& value(bool v) { comma(); out_ += v ? "true" : "false"; return *this; }
  JsonWriter& value(const std::string& s) {
    comma();
    out_ += '"';
    for (char c : s) {
      if (c == '"' || c == '\\') out_ += '\\';
      out_ += c;
    }
    out_ += '"';
    return *this;
  }
  JsonWriter& value(const char* s) { return value(std::string(s)); }
  JsonWriter& null() { comma(); out_ += "null"; return *this; }

  const std::string& str() const { return out_; }

 private:
  void open(char c) { comma(); out_ += c; pending_ = false; }
  void close(char c) { out_ += c; pending_ = true; }
  void comma() {
    if (pending_) out_ += ',';
    pending_ = true;
  }
  std::string out_;
  bool pending_ = false;
};

inline std::string measure_to_json(const RadialMeasure& mu) {
  JsonWriter w;
  w.begin_object();
  w.key("dim").value(mu.dim());
  w.key("exemplar");
  if (mu.exemplar_tag()) w.value(exemplar_name(*mu.exemplar_tag()));
  else w.null();
  w.key("atoms").begin_array();
  for (const auto& a : mu.atoms())
    w.begin_array().value(a.radius).value(a.mass).end_array();
  w.end_array();
  w.key("density").begin_array();
  for (const auto& n : mu.density())
    w.begin_array().value(n.radius).value(n.value).end_array();
  w.end_array();
  w.end_object();
  return w.str();
}

inline RadialMeasure measure_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  int dim = j.at("dim").get<int>();
  if (!j.at("exemplar").is_null()) {
    auto e = exemplar_from_name(j["exemplar"].get<std::string>());
    if (!e) throw std::invalid_argument("unknown exemplar tag");
    if (exemplar_dim(*e) != dim) throw std::invalid_argument("exemplar dim mismatch");
    return RadialMeasure::exemplar(*e);
  }
  std::vector<SphereAtom> atoms;
  for (const auto& a : j.at("atoms"))
    atoms.push_back({a.at(0).get<double>(), a.at(1).get<double>()});
  std::vector<DensityNode> nodes;
  for (const auto& n : j.at("density"))
    nodes.push_back({n.at(0).get<double>(), n.at(1).get<double>()});
  return RadialMeasure::from_parts(dim, std::move(atoms), std::move(nodes));
}

inline std::string certificate_to_json(const Certificate& c) {
  JsonWriter w;
  w.begin_object();
  w.key("dim").value(c.dim);
  w.key("alpha").value(c.alpha);
  w.key("terms").begin_array();
  for (const auto& t : c.terms)
    w.begin_array().value(t.lambda).value(t.coeff).end_array();
  w.end_array();
  w.key("c_poly").value(c.c_poly);
  w.key("d_const").value(c.d_const);
  w.key("tail_bound").value(c.tail_bound);
  w.key("family").value(cert_family_name(c.family));
  w.end_object();
  return w.str();
}

inline Certificate certificate_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Certificate c;
  c.dim = j.at("dim").get<int>();
  c.alpha = j.at("alpha").get<double>();
  for (const auto& t : j.at("terms"))
    c.terms.push_back({t.at(0).get<double>(), t.at(1).get<double>()});
  c.c_poly = j.at("c_poly").get<double>();
  c.d_const = j.at("d_const").get<double>();
  c.tail_bound = j.at("tail_bound").get<double>();
  c.family = cert_family_from_name(j.at("family").get<std::string>());
  return c;
}

inline std::string lp_instance_to_json(const LpInstance& inst) {
  JsonWriter w;
  w.begin_object();
  w.key("triple").begin_object();
  w.key("alpha").value(inst.triple.alpha);
  w.key("beta").value(inst.triple.beta);
  w.key("dim").value(inst.triple.dim);
  w.end_object();
  w.key("radii").begin_array();
  for (double r : inst.radii) w.value(r);
  w.end_array();
  w.key("freqs").begin_array();
  for (double f : inst.freqs) w.value(f);
  w.end_array();
  w.key("freq_window").value(inst.freq_window);
  w.key("positive_fourier").value(inst.positive_fourier);
  w.key("options").begin_object();
  w.key("max_cut_rounds").value(inst.options.max_cut_rounds);
  w.key("violation_tol").value(inst.options.violation_tol);
  w.key("max_cuts_per_round").value(inst.options.max_cuts_per_round);
  w.key("pivot_rule").value(inst.options.pivot_rule);
  w.end_object();
  w.end_object();
  return w.str();
}

inline LpInstance lp_instance_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  LpInstance inst;
  inst.triple = Triple(j.at("triple").at("alpha").get<double>(),
                       j.at("triple").at("beta").get<double>(),
                       j.at("triple").at("dim").get<int>());
  for (const auto& r : j.at("radii")) inst.radii.push_back(r.get<double>());
  for (const auto& f : j.at("freqs")) inst.freqs.push_back(f.get<double>());
  inst.freq_window = j.at("freq_window").get<double>();
  inst.positive_fourier = j.value("positive_fourier", false);
  if (j.contains("options")) {
    const auto& o = j["options"];
    inst.options.max_cut_rounds = o.value("max_cut_rounds", inst.options.max_cut_rounds);
    inst.options.violation_tol = o.value("violation_tol", inst.options.violation_tol);
    inst.options.max_cuts_per_round =
        o.value("max_cuts_per_round", inst.options.max_cuts_per_round);
    inst.options.pivot_rule = o.value("pivot_rule", inst.options.pivot_rule);
  }
  inst.validate();
  return inst;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace fex
