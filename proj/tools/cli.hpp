#pragma once

// Command-line front end. run() is the whole program minus process setup,
// so tests drive it directly with string streams.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "powerlocal/powerlocal.hpp"

namespace powerlocal::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kDomain = 2, kUsage = 64, kBadSpec = 65 };

/// Raised for function spec files that cannot be read or parsed.
struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Doubles are written at 12 significant digits so output is byte-stable.
inline double round12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

inline Json big_json(const BigInt& v) {
  if (v >= std::numeric_limits<i64>::min() && v <= std::numeric_limits<i64>::max()) {
    return static_cast<i64>(v);
  }
  return v.str();
}

inline Json opt_json(const std::optional<double>& v) { return v ? Json(round12(*v)) : Json(nullptr); }

inline Json rational_json(const FactoredRational& x) { return x.to_fraction_string(); }

/// {"sign": s, "exponents": {"p": e}}.
inline Json factored_json(const FactoredRational& x) {
  Json e = Json::object();
  for (auto [p, k] : x.exponents()) e[std::to_string(p)] = k;
  return Json{{"sign", x.sign()}, {"exponents", e}};
}

inline Json tuple_json(std::span<const FactoredRational> c) {
  Json a = Json::array();
  for (const auto& x : c) a.push_back(rational_json(x));
  return a;
}

template <class Row>
Json matrix_json(const std::vector<Row>& rows) {
  Json a = Json::array();
  for (const auto& r : rows) {
    Json row = Json::array();
    for (const auto& v : r) {
      if constexpr (std::is_same_v<std::decay_t<decltype(v)>, BigInt>) row.push_back(big_json(v));
      else row.push_back(v);
    }
    a.push_back(row);
  }
  return a;
}

inline Json config_json(const BoundConfig& cfg) {
  return Json{{"M", round12(cfg.M)},
              {"c1", round12(cfg.c1)},
              {"c2", round12(cfg.c2)},
              {"implied_constant", round12(cfg.implied_constant)}};
}

inline std::string join(std::span<const u64> v, char sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s.push_back(sep);
    s += std::to_string(v[i]);
  }
  return s;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, sep);)
    if (!item.empty()) out.push_back(item);
  return out;
}

inline std::vector<FactoredRational> parse_tuple(const std::string& s) {
  std::vector<FactoredRational> out;
  for (const auto& item : split(s, ',')) out.push_back(parse_rational(item));
  if (out.empty()) throw DomainError("bad_tuple", "the tuple is empty");
  return out;
}

inline std::vector<u64> parse_u64_list(const std::string& s) {
  std::vector<u64> out;
  for (const auto& item : split(s, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoull(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw DomainError("bad_integer", "not a nonnegative integer: " + item);
    }
  }
  return out;
}

/// {"kind":"power","exponent":k} or
/// {"kind":"table","sign_value":s,"default_exponent":k,"overrides":{"q":"a/b"}}.
inline MultiplicativeMap parse_function_spec(const Json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "power") {
      if (j.size() != 2) throw SpecError("power spec takes only kind and exponent");
      return MultiplicativeMap::global_power(j.at("exponent").get<i64>());
    }
    if (kind != "table") throw SpecError("unknown kind '" + kind + "'");
    for (const auto& [key, _] : j.items()) {
      if (key != "kind" && key != "sign_value" && key != "default_exponent" && key != "overrides") {
        throw SpecError("unknown field '" + key + "'");
      }
    }
    std::optional<int> sign;
    if (j.contains("sign_value")) sign = j.at("sign_value").get<int>();
    const i64 k = j.value("default_exponent", i64{1});
    std::map<u64, FactoredRational> overrides;
    if (j.contains("overrides")) {
      for (const auto& [key, value] : j.at("overrides").items()) {
        const u64 q = parse_u64_list(key).at(0);
        const std::string text = value.is_string() ? value.get<std::string>() : std::to_string(value.get<i64>());
        overrides.emplace(q, parse_rational(text));
      }
    }
    return MultiplicativeMap::table(std::move(overrides), k, sign);
  } catch (const SpecError&) {
    throw;
  } catch (const std::exception& e) {
    throw SpecError(e.what());
  }
}

inline Json function_json(const MultiplicativeMap& f) {
  if (f.kind() == MapKind::GlobalPower) return Json{{"kind", "power"}, {"exponent", f.default_exponent()}};
  Json ov = Json::object();
  for (const auto& [q, v] : f.overrides()) ov[std::to_string(q)] = v.to_fraction_string();
  return Json{{"kind", "table"},
              {"sign_value", f.sign_value()},
              {"default_exponent", f.default_exponent()},
              {"overrides", ov}};
}

inline MultiplicativeMap load_function_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot read function spec " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const std::exception& e) {
    throw SpecError(std::string("malformed JSON: ") + e.what());
  }
  return parse_function_spec(j);
}

struct Common {
  std::string prime_cache;
  unsigned workers = 1;
  std::string csv;
  bool progress = false;
  BoundConfig cfg;
};

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(const std::vector<std::string>& args);

 private:
  PrimeCache cache_for(u64 limit) {
    if (common_.progress) err_ << "sieving to " << limit << "\n";
    if (common_.prime_cache.empty()) return PrimeCache(limit);
    return PrimeCache::load_or_build(common_.prime_cache, limit);
  }

  std::ofstream open_csv() {
    std::ofstream f(common_.csv);
    if (!f) throw DomainError("csv_io", "cannot write " + common_.csv);
    return f;
  }

  void emit(Json report) {
    report["config"] = config_json(common_.cfg);
    out_ << report.dump(2) << "\n";
  }

  void sf_scan();
  void tf_scan();
  void witness();
  void construct();
  void relations_cmd();
  void kummer_cmd();
  void frobenius_cmd();
  void density_cmd();
  void heuristic_cmd();
  void bounds_cmd();
  void disc_cmd();

  std::ostream& out_;
  std::ostream& err_;
  Common common_;

  // Subcommand arguments.
  std::string function_path_, mode_ = "exact", tuple_, witnesses_, statistic_ = "c2k", exponents_;
  u64 limit_ = 0, bound_ = 100, count_ = 3, search_limit_ = 10000, terms_ = 20;
  u64 p_ = 0, ell_ = 3, modulus_ = 0, generator_ = 0, cyclotomic_ = 0, pi_x_ = 0;
  u64 chebyshev_ = 0;
  double x_ = 0, b_f_ = 0;
  std::vector<double> mertens_;
};

inline void Runner::sf_scan() {
  const auto f = load_function_spec(function_path_);
  DecisionMode mode;
  if (mode_ == "empirical") mode = DecisionMode::empirical(bound_);
  else if (mode_ != "exact") throw DomainError("bad_mode", "mode must be exact or empirical");
  const auto cache = cache_for(limit_);
  const auto scan = scan_sf(f, limit_, mode, cache, common_.workers);
  Json members = Json::array(), kp = Json::object();
  for (const auto& v : scan.verdicts) {
    if (v.member != Membership::Yes) continue;
    members.push_back(v.p);
    kp[std::to_string(v.p)] = *v.k_p;
  }
  Json params{{"function", function_json(f)}, {"limit", limit_}, {"mode", mode_}};
  if (mode.kind == DecisionMode::Kind::Empirical) params["bound"] = bound_;
  emit(Json{{"command", "sf-scan"},
            {"parameters", params},
            {"range", {2, limit_}},
            {"x", limit_},
            {"count", scan.count()},
            {"counted", scan.count()},
            {"skipped", scan.unknown()},
            {"pi_x", scan.pi()},
            {"density", round12(scan.density())},
            {"observed", round12(scan.density())},
            {"members", members},
            {"k_p", kp},
            {"cache_limit", cache.limit()}});
  if (!common_.csv.empty()) {
    auto csv = open_csv();
    csv << "p,member,k_p\n";
    for (const auto& v : scan.verdicts) {
      csv << v.p << ',' << to_string(v.member) << ',';
      if (v.k_p) csv << *v.k_p;
      csv << '\n';
    }
  }
}

inline void Runner::tf_scan() {
  const auto f = load_function_spec(function_path_);
  const auto cache = cache_for(limit_);
  const auto scan = scan_tf(f, limit_, bound_, cache, common_.workers);
  emit(Json{{"command", "tf-scan"},
            {"parameters", {{"function", function_json(f)}, {"limit", limit_}, {"bound", bound_}}},
            {"range", {2, limit_}},
            {"applicable", scan.applicable},
            {"counted", scan.tf.size()},
            {"skipped", 0},
            {"tf", scan.tf},
            {"sf", scan.sf},
            {"tf_minus_sf", scan.tf_minus_sf},
            {"quasi_ok", scan.quasi_ok},
            {"cache_limit", cache.limit()}});
}

inline void Runner::witness() {
  const auto f = load_function_spec(function_path_);
  const auto w = find_witnesses(f, count_, search_limit_);
  Json values = Json::array();
  for (u64 n : w) values.push_back(f(n).to_fraction_string());
  emit(Json{{"command", "witness"},
            {"parameters", {{"function", function_json(f)}, {"count", count_}, {"search_limit", search_limit_}}},
            {"witnesses", w},
            {"values", values}});
}

inline void Runner::construct() {
  std::map<u64, u64> ks;
  for (const auto& item : split(exponents_, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() != 2) throw DomainError("bad_exponents", "expected p:k pairs, got '" + item + "'");
    ks[parse_u64_list(parts[0]).at(0)] = parse_u64_list(parts[1]).at(0);
  }
  const auto g = construct_prescribed(ks);
  Json values = Json::array();
  for (u64 n = 1; n <= terms_; ++n) values.push_back(g(n));
  Json ex = Json::object();
  for (auto [p, k] : ks) ex[std::to_string(p)] = k;
  emit(Json{{"command", "construct"},
            {"parameters", {{"exponents", ex}, {"terms", terms_}}},
            {"modulus", g.modulus()},
            {"values", values}});
}

inline void Runner::relations_cmd() {
  const auto c = parse_tuple(tuple_);
  const auto L = build_lattice(c);
  const auto rep = relations(L);
  Json minors = nullptr;
  if (rep.minors) {
    minors = Json::array();
    for (const auto& v : *rep.minors) minors.push_back(big_json(v));
  }
  emit(Json{{"command", "relations"},
            {"parameters", {{"tuple", tuple_json(c)}}},
            {"factored", [&] {
               Json a = Json::array();
               for (const auto& x : c) a.push_back(factored_json(x));
               return a;
             }()},
            {"support", L.support},
            {"exponent_matrix", matrix_json(L.matrix)},
            {"kernel_basis", matrix_json(rep.kernel_basis)},
            {"multiplicatively_independent", rep.kernel_basis.empty()},
            {"minors", minors},
            {"delta", rep.delta ? big_json(*rep.delta) : Json(nullptr)}});
}

inline void Runner::kummer_cmd() {
  const auto c = parse_tuple(tuple_);
  const auto kd = kummer_degree(c, ell_);
  emit(Json{{"command", "kummer-degree"},
            {"parameters", {{"tuple", tuple_json(c)}, {"ell", ell_}}},
            {"m", kd.m},
            {"dim_v", kd.dim_v},
            {"d", kd.d},
            {"degree", big_json(kd.degree)},
            {"relations", matrix_json(kd.relations)},
            {"image", matrix_json(kd.image)}});
}

inline void Runner::frobenius_cmd() {
  if (modulus_ != 0) {
    emit(Json{{"command", "frobenius"},
              {"parameters", {{"p", p_}, {"modulus", modulus_}}},
              {"frobenius", cyclotomic_frobenius(p_, modulus_)}});
    return;
  }
  const auto c = parse_tuple(tuple_);
  const auto s = generator_ ? frobenius_vector(p_, ell_, c, generator_) : frobenius_vector(p_, ell_, c);
  Json params{{"p", p_}, {"ell", ell_}, {"tuple", tuple_json(c)}};
  if (generator_) params["generator"] = generator_;
  Json report{{"command", "frobenius"}, {"parameters", params}, {"z", s.z}, {"b", s.b}};
  if (c.size() % 2 == 0) report["in_C2k"] = in_c2k(s.b, ell_);
  emit(report);
}

inline void Runner::density_cmd() {
  const auto c = parse_tuple(tuple_);
  DensityStatistic stat;
  if (statistic_ == "c2k") stat = DensityStatistic::C2k;
  else if (statistic_ == "split") stat = DensityStatistic::Split;
  else throw DomainError("bad_statistic", "statistic must be c2k or split");
  const auto cache = cache_for(limit_);
  const auto scan = scan_density(ell_, c, limit_, cache, common_.workers, stat, !common_.csv.empty());
  Json report{{"command", "density-scan"},
              {"parameters", {{"ell", ell_}, {"tuple", tuple_json(c)}, {"limit", limit_}, {"statistic", statistic_}}},
              {"ell", ell_},
              {"tuple", tuple_json(c)},
              {"x", limit_},
              {"range", {2, limit_}},
              {"counted", scan.counted},
              {"skipped", scan.skipped},
              {"hits", scan.hits},
              {"observed", round12(scan.observed)},
              {"expected", round12(scan.expected)},
              {"deviation", round12(scan.deviation)},
              {"kummer_degree", big_json(scan.kummer.degree)}};
  if (scan.ratio) {
    report["class"] = Json{{"size_c", big_json(scan.ratio->size_c)},
                           {"fiber", big_json(scan.ratio->fiber)},
                           {"group", big_json(scan.ratio->group)},
                           {"group_density", round12(scan.ratio->group_density)},
                           {"class_bound", round12(scan.ratio->class_bound)},
                           {"bound_hypothesis", scan.ratio->bound_hypothesis},
                           {"within_class_bound", scan.ratio->within_class_bound}};
  }
  report["cache_limit"] = cache.limit();
  emit(report);
  if (!common_.csv.empty()) {
    auto csv = open_csv();
    csv << "p,z-vector,b-vector," << (stat == DensityStatistic::C2k ? "in_C4" : "split") << "\n";
    for (const auto& row : scan.rows) {
      if (row.skipped) continue;
      csv << row.p << ',' << join(row.z, ';') << ',' << join(row.b, ';') << ',' << (row.hit ? 1 : 0) << '\n';
    }
  }
}

inline void Runner::heuristic_cmd() {
  const auto f = load_function_spec(function_path_);
  const auto w = parse_u64_list(witnesses_);
  const auto cache = cache_for(limit_);
  const auto scan = heuristic_scan(f, w, limit_, cache, common_.workers);
  emit(Json{{"command", "heuristic"},
            {"parameters", {{"function", function_json(f)}, {"witnesses", w}, {"limit", limit_}}},
            {"range", {2, limit_}},
            {"count", scan.count},
            {"counted", scan.counted},
            {"skipped", scan.skipped},
            {"pi_x", scan.pi_x},
            {"observed", round12(scan.ratio)},
            {"heuristic_sum", round12(scan.heuristic_sum)},
            {"members", scan.members},
            {"cache_limit", cache.limit()}});
}

inline void Runner::bounds_cmd() {
  const auto& cfg = common_.cfg;
  cfg.validate();
  Json params{{"x", round12(x_)}, {"b_f", round12(b_f_)}};
  Json report{{"command", "bounds"}, {"parameters", params}};
  if (x_ > 0) {
    const auto s = yz_schedule(x_, cfg);
    report["schedule"] = Json{{"Y", round12(s.Y)},
                              {"Z", round12(s.Z)},
                              {"cap", round12(s.cap)},
                              {"z_within_cap", s.z_within_cap},
                              {"y_exceeds_z", s.y_exceeds_z},
                              {"formula", "Y = L3/L4^2, Z = L2/(3M+1), cap = (log x/(6 c2 L2)^2)^(1/15)"}};
    u64 pi = pi_x_;
    if (pi == 0) {
      if (x_ > 1e10) throw DomainError("pi_x_required", "pass --pi-x for x above 1e10");
      if (common_.progress) err_ << "counting primes to " << x_ << "\n";
      pi = count_primes(static_cast<u64>(x_));
    }
    const auto mb = main_bound(x_, b_f_, pi, cfg);
    report["main_bound"] = Json{{"pi_x", mb.pi_x},
                                {"ratio", round12(mb.ratio)},
                                {"main_term", round12(mb.main_term)},
                                {"total", round12(mb.total)},
                                {"log_ratio_term", opt_json(mb.log_ratio_term)},
                                {"tail_term", opt_json(mb.tail_term)},
                                {"formula", "main_term = L4/L3 * pi(x) * implied_constant, total = main_term + b_f"}};
  }
  if (!mertens_.empty()) {
    if (mertens_.size() != 2) throw DomainError("bad_range", "--mertens takes Y,Z");
    const auto cache = cache_for(static_cast<u64>(std::ceil(mertens_[1])) + 1);
    report["mertens"] = Json{{"Y", round12(mertens_[0])},
                             {"Z", round12(mertens_[1])},
                             {"product", round12(mertens_product(mertens_[0], mertens_[1], cache))},
                             {"formula", "prod over odd primes Y <= l < Z of (1 - 1/(l-1))"}};
  }
  if (chebyshev_ != 0) {
    const auto cache = cache_for(chebyshev_);
    const auto ch = chebyshev_check_range(chebyshev_, cache, cfg);
    report["chebyshev"] = Json{{"Z", chebyshev_},
                               {"log_product", round12(ch.log_product)},
                               {"bound", round12(ch.bound)},
                               {"holds_for_all_Z", ch.holds},
                               {"first_failure", ch.first_failure ? Json(*ch.first_failure) : Json(nullptr)},
                               {"formula", "sum of log l over l <= Z versus M Z"}};
  }
  emit(report);
}

inline void Runner::disc_cmd() {
  if (cyclotomic_ != 0) {
    emit(Json{{"value", big_json(cyclotomic_discriminant(cyclotomic_))},
              {"command", "disc"},
              {"parameters", {{"cyclotomic", cyclotomic_}}},
              {"log_abs", round12(cyclotomic_log_discriminant(cyclotomic_))}});
    return;
  }
  if (tuple_.empty()) throw DomainError("bad_arguments", "disc needs --cyclotomic N or --ell L --tuple C");
  const auto c = parse_tuple(tuple_);
  emit(Json{{"log_bound", round12(kummer_disc_log_bound(ell_, c))},
            {"command", "disc"},
            {"parameters", {{"ell", ell_}, {"tuple", tuple_json(c)}}},
            {"formula", "(l-1)^2 l^(d-1) (sum log(num*den) + (d+1) log l)"}});
}

inline int Runner::run(const std::vector<std::string>& args) {
  CLI::App app{"Local power-map primes, Kummer degrees and Chebotarev statistics", "powerlocal"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--prime-cache", common_.prime_cache, "prime cache file, created or extended on demand");
  app.add_option("--workers", common_.workers, "worker threads for scans")->check(CLI::Range(1u, 256u));
  app.add_option("--csv", common_.csv, "write per-prime rows to this CSV file");
  app.add_option("--c1", common_.cfg.c1, "constant c1 (default 1)");
  app.add_option("--c2", common_.cfg.c2, "constant c2 (default 1)");
  app.add_option("--implied-constant", common_.cfg.implied_constant, "implied constant (default 1)");
  app.add_option("--M", common_.cfg.M, "Chebyshev constant M (default log 4)");
  app.add_flag("--progress", common_.progress, "progress messages on stderr");

  std::function<void()> action;
  auto sub = [&](const char* name, const char* help, void (Runner::*fn)()) {
    auto* s = app.add_subcommand(name, help);
    s->callback([&, fn] { action = [this, fn] { (this->*fn)(); }; });
    return s;
  };

  auto* sf = sub("sf-scan", "local power-map primes S_f(x)", &Runner::sf_scan);
  sf->add_option("--function", function_path_, "function spec JSON")->required();
  sf->add_option("--limit", limit_, "x")->required();
  sf->add_option("--mode", mode_, "exact or empirical")->check(CLI::IsMember({"exact", "empirical"}));
  sf->add_option("--bound", bound_, "empirical decision bound B");

  auto* tf = sub("tf-scan", "shift-congruence primes T_f(x) against S_f(x)", &Runner::tf_scan);
  tf->add_option("--function", function_path_)->required();
  tf->add_option("--limit", limit_)->required();
  tf->add_option("--bound", bound_, "check f(n+p) = f(n) for n <= B");

  auto* wi = sub("witness", "square-free n with f(n) outside n^Z and -n^Z", &Runner::witness);
  wi->add_option("--function", function_path_)->required();
  wi->add_option("--count", count_);
  wi->add_option("--search-limit", search_limit_);

  auto* co = sub("construct", "CRT function with prescribed local exponents", &Runner::construct);
  co->add_option("--exponents", exponents_, "p:k pairs, comma separated")->required();
  co->add_option("--terms", terms_, "number of values to print");

  auto* re = sub("relations", "multiplicative relations of a tuple", &Runner::relations_cmd);
  re->add_option("--tuple", tuple_, "comma separated rationals")->required();

  auto* kd = sub("kummer-degree", "[Q(zeta_l, c^(1/l)) : Q(zeta_l)]", &Runner::kummer_cmd);
  kd->add_option("--tuple", tuple_)->required();
  kd->add_option("--ell", ell_)->required();

  auto* fr = sub("frobenius", "Frobenius class at p", &Runner::frobenius_cmd);
  fr->add_option("--p", p_)->required();
  fr->add_option("--ell", ell_);
  fr->add_option("--tuple", tuple_);
  fr->add_option("--generator", generator_, "generator of mu_l mod p used for logs");
  fr->add_option("--modulus", modulus_, "cyclotomic Frobenius in (Z/nZ)^x instead");

  auto* de = sub("density-scan", "Frobenius density in C_2k or the split layer", &Runner::density_cmd);
  de->add_option("--ell", ell_)->required();
  de->add_option("--tuple", tuple_)->required();
  de->add_option("--limit", limit_)->required();
  de->add_option("--statistic", statistic_)->check(CLI::IsMember({"c2k", "split"}));

  auto* he = sub("heuristic", "primes where f(n) mod p lies in Omega_n(p)", &Runner::heuristic_cmd);
  he->add_option("--function", function_path_)->required();
  he->add_option("--witnesses", witnesses_, "comma separated n_i")->required();
  he->add_option("--limit", limit_)->required();

  auto* bo = sub("bounds", "Y/Z schedule, main bound, Mertens and Chebyshev products", &Runner::bounds_cmd);
  bo->add_option("--x", x_);
  bo->add_option("--b-f", b_f_);
  bo->add_option("--pi-x", pi_x_, "pi(x) if known");
  bo->add_option("--mertens", mertens_, "Y,Z")->delimiter(',')->expected(2);
  bo->add_option("--chebyshev", chebyshev_, "check every Z up to this limit");

  auto* di = sub("disc", "cyclotomic discriminant or Kummer divisor bound", &Runner::disc_cmd);
  di->add_option("--cyclotomic", cyclotomic_);
  di->add_option("--ell", ell_);
  di->add_option("--tuple", tuple_);

  auto error_json = [&](const std::string& code, const std::string& message) {
    out_ << Json{{"error", {{"code", code}, {"message", message}}}}.dump(2) << "\n";
  };

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out_, err_);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out_, err_);
  } catch (const CLI::ParseError& e) {
    err_ << e.what() << "\n";
    error_json("usage", e.what());
    return kUsage;
  }
  try {
    action();
  } catch (const SpecError& e) {
    error_json("malformed_function_spec", e.what());
    return kBadSpec;
  } catch (const DomainError& e) {
    error_json(e.code(), e.what());
    return kDomain;
  }
  return kOk;
}

/// Runs one invocation; args exclude the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Runner r(out, err);
  return r.run(args);
}

}  // namespace powerlocal::cli
