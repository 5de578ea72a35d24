#pragma once

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "cantor/config.hpp"
#include "cantor/conjugacy.hpp"
#include "cantor/ergodic.hpp"
#include "cantor/errors.hpp"
#include "cantor/hierarchy.hpp"
#include "cantor/metrics.hpp"
#include "cantor/ratioset.hpp"
#include "cantor/real.hpp"
#include "cantor/scaling.hpp"
#include "cantor/scenery.hpp"
#include "cantor/symbolic.hpp"
#include "cantor/system.hpp"
#include "cantor/thermo.hpp"
#include "cantor/version.hpp"

namespace cantor {

// Exit-code contract: 0 ok, 2 config errors, 3 invariant violations,
// 4 resource caps, 1 anything else.  Logs go to stderr only.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInvariant = 3;
inline constexpr int kExitResource = 4;

namespace cli_detail {

// Deterministic CSV artifact with provenance comment lines.
class Artifact {
 public:
  Artifact(const std::string& path, const RunConfig& cfg) : out_(path) {
    if (!out_) throw config_error("cannot open output file: " + path);
    out_ << "# cantor " << kLibraryVersion << " config_hash=" << config_hash(cfg) << "\n";
  }
  void headers(const std::string& line) { out_ << line << "\n"; }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
  }
  std::ofstream& stream() { return out_; }

 private:
  std::ofstream out_;
};

inline void write_json_artifact(const std::string& path, const RunConfig& cfg, json j) {
  j["lib_version"] = kLibraryVersion;
  j["config_hash"] = config_hash(cfg);
  std::ofstream out(path);
  if (!out) throw config_error("cannot open output file: " + path);
  out << j.dump(2) << "\n";
}

inline std::string default_out(const std::string& cmd, const RunConfig& cfg) {
  if (!cfg.out.empty()) return cfg.out;
  return cmd + (cmd == "dimension" || cmd == "validate" ? ".json" : ".csv");
}

template <class R>
ContractionSystem<R> system_a(const RunConfig& cfg) {
  auto sys = make_system<R>(cfg.system);
  sys.depth_cap = cfg.depth_cap;
  return sys;
}

template <class R>
ContractionSystem<R> system_b(const RunConfig& cfg) {
  if (!cfg.system_b.family.empty()) {
    auto sys = make_system<R>(cfg.system_b);
    sys.depth_cap = cfg.depth_cap;
    return sys;
  }
  auto sys = make_conjugated(system_a<R>(cfg), R(cfg.eps));
  sys.depth_cap = cfg.depth_cap;
  return sys;
}

// Orbit prefix for scenery-style commands: the explicit `past` bits when
// given, otherwise a Gibbs-sampled orbit.
template <class R>
Word resolve_prefix(const ContractionSystem<R>& sys, const RunConfig& cfg, int length) {
  if (!cfg.past.empty()) {
    Word w(cfg.past);
    if (w.size() < length)
      throw config_error("past/prefix shorter than required length " + std::to_string(length));
    return w;
  }
  const int law_depth = 6;
  const auto dim = bowen_root(sys, 10, R(1e-9));
  const auto gibbs = gibbs_weights(sys, dim.d, law_depth);
  return Word(sample_orbit(gibbs, length, cfg.seed).symbols);
}

template <class R>
GapSeed<R> resolve_seed(const RunConfig& cfg, const ContractionSystem<R>& A,
                        const ContractionSystem<R>& B) {
  if (cfg.gap_seed == "affine") return affine_gap_seed(A, B);
  if (cfg.gap_seed == "psi") {
    if (!B.phi0.is_conjugated())
      throw config_error("gap_seed=psi needs a conjugated target system");
    const R e = B.phi0.conjugation_eps();
    return function_gap_seed<R>([e](const R& t) { return t + e * t * (R(1) - t); },
                                [e](const R& t) { return R(1) + e * (R(1) - R(2) * t); },
                                [e](const R&) { return R(-2) * e; }, "psi");
  }
  if (cfg.gap_seed == "bump") {
    const R alo = A.gap_lo(), la = A.gap_hi() - alo;
    const R blo = B.gap_lo(), lb = B.gap_hi() - blo;
    const R amp(0.25);
    return function_gap_seed<R>(
        [=](const R& t) {
          const R u = (t - alo) / la;
          return blo + lb * (u + amp * u * (R(1) - u));
        },
        [=](const R& t) {
          const R u = (t - alo) / la;
          return lb * (R(1) + amp * (R(1) - R(2) * u)) / la;
        },
        [=](const R&) { return -R(2) * amp * lb / (la * la); }, "bump");
  }
  throw config_error("unknown gap_seed: " + cfg.gap_seed);
}

template <class R>
void save_table(const std::string& path, const ScalingTable<R>& t, const RunConfig& cfg) {
  json j;
  j["format"] = "cantor-scaling-table";
  j["format_version"] = 1;
  j["m"] = t.m;
  j["n"] = t.n;
  j["err_bound"] = to_decimal(t.err_bound);
  j["beta"] = to_decimal(t.beta);
  j["gamma"] = to_decimal(t.gamma);
  j["K"] = to_decimal(t.K);
  j["system"] = detail::spec_to_json(cfg.system);
  j["precision_bits"] = cfg.precision_bits;
  json rows = json::array();
  for (std::uint64_t i = 0; i < t.entries.size(); ++i) {
    const auto& e = t.entries[i];
    rows.push_back({{"dual_word", to_string(word_from_index(i, t.m))},
                    {"l", to_decimal(e.l)},
                    {"g", to_decimal(e.g)},
                    {"r", to_decimal(e.r)}});
  }
  j["entries"] = rows;
  write_json_artifact(path, cfg, std::move(j));
}

template <class R>
ScalingTable<R> load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open table file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw config_error(std::string("table parse error: ") + e.what());
  }
  if (j.value("format", "") != "cantor-scaling-table" || j.value("format_version", 0) != 1)
    throw config_error("not a cantor-scaling-table v1 file: " + path);
  ScalingTable<R> t;
  t.m = j.at("m").get<int>();
  t.n = j.at("n").get<int>();
  t.err_bound = from_decimal<R>(j.at("err_bound").get<std::string>());
  t.beta = from_decimal<R>(j.at("beta").get<std::string>());
  t.gamma = from_decimal<R>(j.at("gamma").get<std::string>());
  t.K = from_decimal<R>(j.at("K").get<std::string>());
  t.entries.resize(std::size_t{1} << t.m);
  for (const auto& row : j.at("entries")) {
    const auto idx = word_index(Word(row.at("dual_word").get<std::string>()));
    t.entries[idx] = RatioTriple<R>{from_decimal<R>(row.at("l").get<std::string>()),
                                    from_decimal<R>(row.at("g").get<std::string>()),
                                    from_decimal<R>(row.at("r").get<std::string>())};
  }
  return t;
}

// conformal proxy weights on a rescaled skeleton: (interval length)^d
template <class R>
std::vector<R> conformal_on_set(const RescaledSet<R>& s, const R& d) {
  using std::exp;
  using std::log;
  std::vector<R> w;
  w.reserve(s.count());
  for (std::size_t i = 0; i < s.count(); ++i) w.push_back(exp(d * log(s.len(i))));
  return w;
}

inline SetFunctional parse_functional(const std::string& name) {
  if (name == "refdist") return SetFunctional::refdist;
  if (name == "first_gap_left") return SetFunctional::first_gap_left;
  if (name == "first_gap_len") return SetFunctional::first_gap_len;
  if (name == "largest_gap_mid") return SetFunctional::largest_gap_mid;
  throw config_error("unknown functional: " + name);
}

inline int parse_coord(const std::string& name) {
  if (name == "l") return 0;
  if (name == "g") return 1;
  if (name == "r") return 2;
  throw config_error("coord must be one of l, g, r");
}

// ---------------------------------------------------------------------------
// command bodies (templated on the working real type)

template <class R>
int cmd_validate(const RunConfig& cfg, std::ostream& log) {
  const auto sys = system_a<R>(cfg);
  const auto rep = validate(sys, 256);
  json j;
  j["pass"] = rep.pass;
  j["c_est"] = to_decimal(rep.c_est);
  j["btilde_est"] = to_decimal(rep.btilde_est);
  j["alpha"] = to_decimal(sys.alpha);
  j["beta"] = to_decimal(sys.beta);
  j["c"] = to_decimal(sys.c);
  j["K"] = to_decimal(sys.K);
  j["certified"] = sys.certified;
  json checks = json::array();
  for (const auto& chk : rep.checks)
    checks.push_back({{"name", chk.name}, {"pass", chk.pass}, {"witness", chk.witness}});
  j["checks"] = checks;
  write_json_artifact(default_out("validate", cfg), cfg, std::move(j));
  log << "validate: " << (rep.pass ? "pass" : "FAIL") << "\n";
  if (!rep.pass) throw invariant_violation("validation failed; see " + default_out("validate", cfg));
  return kExitOk;
}

template <class R>
int cmd_levels(const RunConfig& cfg, std::ostream& log) {
  const auto sys = system_a<R>(cfg);
  Artifact art(default_out("levels", cfg), cfg);
  art.headers("word,left,right,length");
  for (const auto& iv : level_intervals(sys, cfg.depth))
    art.row({to_string(iv.word), to_decimal(iv.left), to_decimal(iv.right()),
             to_decimal(iv.length)});
  log << "levels: wrote 2^" << cfg.depth << " intervals\n";
  return kExitOk;
}

template <class R>
int cmd_scaling(const RunConfig& cfg, std::ostream& log) {
  const auto sys = system_a<R>(cfg);
  const auto table = build_scaling_table(sys, cfg.table_depth, cfg.est_depth);
  Artifact art(default_out("scaling", cfg), cfg);
  art.headers("dual_word,l,g,r,err_bound");
  for (std::uint64_t i = 0; i < table.entries.size(); ++i) {
    const auto& e = table.entries[i];
    art.row({to_string(word_from_index(i, table.m)), to_decimal(e.l), to_decimal(e.g),
             to_decimal(e.r), to_decimal(table.err_bound)});
  }
  if (!cfg.table_out.empty()) save_table(cfg.table_out, table, cfg);
  log << "scaling: table m=" << table.m << " n=" << table.n << "\n";
  return kExitOk;
}

template <class R>
int cmd_ratioset(const RunConfig& cfg, std::ostream& log) {
  const auto sys = std::make_shared<ContractionSystem<R>>(system_a<R>(cfg));
  ScalingSource<R> src;
  if (!cfg.table_file.empty()) {
    auto table = std::make_shared<ScalingTable<R>>(load_table<R>(cfg.table_file));
    src = table_source<R>(table);
  } else {
    auto table = std::make_shared<ScalingTable<R>>(
        build_scaling_table(*sys, cfg.table_depth, cfg.est_depth));
    src = table_source<R>(table);
  }
  DualWord y(cfg.past.empty() ? std::string(static_cast<std::size_t>(cfg.table_depth), '0')
                              : cfg.past);
  const auto set = build_ratio_set(src, y, cfg.depth, cfg.depth_cap);
  Artifact art(default_out("ratioset", cfg), cfg);
  art.headers("index,left,right,length");
  for (std::size_t i = 0; i < set.count(); ++i)
    art.row({std::to_string(i), to_decimal(set.left(i)), to_decimal(set.right(i)),
             to_decimal(set.len(i))});
  log << "ratioset: level " << cfg.depth << ", past " << to_string(y, true) << "\n";
  return kExitOk;
}

template <class R>
int cmd_dimension(const RunConfig& cfg, std::ostream& log) {
  const auto sys = system_a<R>(cfg);
  const auto dim = bowen_root(sys, cfg.depth, R(cfg.tol));
  json j;
  j["d"] = to_decimal(dim.d);
  j["bracket"] = {to_decimal(dim.lower), to_decimal(dim.upper)};
  j["depth"] = dim.depth_used;
  write_json_artifact(default_out("dimension", cfg), cfg, std::move(j));
  if (!cfg.measures_out.empty()) {
    GibbsInfo<R> info;
    const auto nu = gibbs_weights(sys, dim.d, cfg.table_depth, &info);
    Artifact art(cfg.measures_out, cfg);
    art.stream() << "# gibbs weights, d=" << to_decimal(dim.d)
                 << " defect=" << to_decimal(info.invariance_defect) << "\n";
    art.headers("word,weight");
    for (std::uint64_t i = 0; i < nu.weights.size(); ++i)
      art.row({to_string(word_from_index(i, nu.depth)), to_decimal(nu.weights[i])});
  }
  log << "dimension: d=" << to_decimal(dim.d) << "\n";
  return kExitOk;
}

template <class R>
int cmd_scenery(const RunConfig& cfg, std::ostream& log) {
  const auto sys = system_a<R>(cfg);
  const Word prefix = resolve_prefix(sys, cfg, cfg.n_max + cfg.depth + 1);
  const auto seq = scenery_sequence(sys, prefix, cfg.n_max, cfg.depth);
  const auto tmpl = hierarchy_breakpoints(sys, cfg.depth);
  const auto ref = rescaled_subhierarchy(sys, Word{}, cfg.depth, tmpl);
  Artifact art(default_out("scenery", cfg), cfg);
  art.headers("n,refdist,first_gap_left,first_gap_len,largest_gap_mid");
  for (std::size_t n = 0; n < seq.size(); ++n) {
    art.row({std::to_string(n),
             to_decimal(eval_functional(SetFunctional::refdist, seq[n], ref)),
             to_decimal(eval_functional(SetFunctional::first_gap_left, seq[n], ref)),
             to_decimal(eval_functional(SetFunctional::first_gap_len, seq[n], ref)),
             to_decimal(eval_functional(SetFunctional::largest_gap_mid, seq[n], ref))});
  }
  log << "scenery: " << seq.size() << " steps\n";
  return kExitOk;
}

template <class R>
int cmd_converge(const RunConfig& cfg, std::ostream& log) {
  using std::log10;
  using std::pow;
  const auto sys = system_a<R>(cfg);
  const int pad = 8;
  const Word prefix = resolve_prefix(sys, cfg, cfg.n_max + 1);
  const auto grid = dyadic_grid<R>(cfg.grid_pow);
  const auto tmpl = hierarchy_breakpoints(sys, cfg.depth);
  const auto dim = bowen_root(sys, std::min(10, cfg.depth_cap), R(1e-9));

  Artifact art(default_out("converge", cfg), cfg);
  art.headers("n,d_C,d_H,d_M,bound,log10_dC,log10_bound");
  for (int n = 0; n <= cfg.n_max; ++n) {
    const DualWord y(Symbols(prefix.symbols.begin(), prefix.symbols.begin() + n + 1));
    const DualWord deep = y.padded_to(n + 1 + pad);
    const auto ga = phi_grid(sys, y, n + 1, grid);
    const auto gb = phi_grid(sys, deep, n + 1 + pad, grid);
    const R dc = d_c(ga, gb).value;
    const auto sa = rescaled_subhierarchy(sys, y.as_word(), cfg.depth, tmpl);
    const auto sb = rescaled_subhierarchy(sys, deep.as_word(), cfg.depth, tmpl);
    const R dh = d_h(sa, sb).value;
    const auto ma = IntervalMeasure<R>::on_set(sa, conformal_on_set(sa, dim.d));
    const auto mb = IntervalMeasure<R>::on_set(sb, conformal_on_set(sb, dim.d));
    const R dm = d_m(ma, mb).value;
    const R bound = conjugacy_tail_bound(sys, n);
    art.row({std::to_string(n), to_decimal(dc), to_decimal(dh), to_decimal(dm),
             to_decimal(bound), to_decimal(dc > R(0) ? R(log10(dc)) : R(-99)),
             to_decimal(bound > R(0) ? R(log10(bound)) : R(-99))});
  }
  log << "converge: n in [0," << cfg.n_max << "]\n";
  return kExitOk;
}

template <class R>
int cmd_rigidity(const RunConfig& cfg, std::ostream& log) {
  const auto A = system_a<R>(cfg);
  const auto B = system_b<R>(cfg);
  const auto seed = resolve_seed(cfg, A, B);
  const auto grid = dyadic_grid<R>(cfg.grid_pow);
  const auto conj = rigidity_conjugacy(A, B, seed, cfg.depth, grid);
  Artifact art(default_out("rigidity", cfg), cfg);
  art.headers("x,value,dvalue");
  for (std::size_t i = 0; i < conj.grid.size(); ++i)
    art.row({to_decimal(conj.grid.x[i]), to_decimal(conj.grid.v[i]), to_decimal(conj.grid.dv[i])});
  log << "rigidity: table mismatch " << to_decimal(conj.table_mismatch) << " <= tol "
      << to_decimal(conj.table_tolerance) << "\n";
  return kExitOk;
}

template <class R>
int cmd_simulate(const RunConfig& cfg, std::ostream& log) {
  const auto sys = system_a<R>(cfg);
  const auto dim = bowen_root(sys, 10, R(1e-9));
  SceneryProcessParams pp;
  pp.ens_depth = std::min(cfg.table_depth + 4, 12);
  const auto gibbs_law = gibbs_weights(sys, dim.d, 6);
  const auto gibbs_ens = gibbs_weights(sys, dim.d, pp.ens_depth);
  const auto orbit = sample_orbit(gibbs_law, cfg.steps, cfg.seed);
  const auto rep = scenery_process_sim(sys, orbit, cfg.steps, cfg.depth,
                                       parse_functional(cfg.functional), gibbs_ens, pp);
  Artifact art(default_out("simulate", cfg), cfg);
  art.headers("n,f_value_actual,f_value_limitset,running_avg_actual,running_avg_limit,band");
  for (const auto& row : rep.rows)
    art.row({std::to_string(row.n), to_decimal(row.f_actual), to_decimal(row.f_limit),
             to_decimal(row.run_actual), to_decimal(row.run_limit), to_decimal(row.band)});
  log << "simulate: steps=" << cfg.steps << " functional=" << cfg.functional
      << " |time-ens|=" << to_decimal((rep.time_avg_actual - rep.ens_avg)) << "\n";
  if (!rep.perterm_pass || !rep.avg_pass)
    throw invariant_violation("simulate: scenery pairing bound violated");
  return kExitOk;
}

}  // namespace cli_detail

inline int run_command(const std::string& cmd, const RunConfig& cfg, std::ostream& log) {
  return with_precision(cfg.precision_bits, [&](auto tag) -> int {
    using R = decltype(tag);
    using namespace cli_detail;
    if (cmd == "validate") return cmd_validate<R>(cfg, log);
    if (cmd == "levels") return cmd_levels<R>(cfg, log);
    if (cmd == "scaling") return cmd_scaling<R>(cfg, log);
    if (cmd == "ratioset") return cmd_ratioset<R>(cfg, log);
    if (cmd == "dimension") return cmd_dimension<R>(cfg, log);
    if (cmd == "scenery") return cmd_scenery<R>(cfg, log);
    if (cmd == "converge") return cmd_converge<R>(cfg, log);
    if (cmd == "rigidity") return cmd_rigidity<R>(cfg, log);
    if (cmd == "simulate") return cmd_simulate<R>(cfg, log);
    throw config_error("unknown command: " + cmd);
  });
}

// Maps the library's error taxonomy onto the exit-code contract.
inline int run_command_catching(const std::string& cmd, const RunConfig& cfg, std::ostream& log) {
  try {
    return run_command(cmd, cfg, log);
  } catch (const config_error& e) {
    log << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const resource_limit& e) {
    log << "resource limit: " << e.what() << "\n";
    return kExitResource;
  } catch (const invariant_violation& e) {
    log << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const gap_error& e) {
    log << "gap error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace cantor
