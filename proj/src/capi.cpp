#include "lpscma/lpscma.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "core/codebook_io.hpp"
#include "core/complexity.hpp"
#include "core/labeling.hpp"
#include "core/metrics.hpp"
#include "core/optimizer.hpp"
#include "core/parallel.hpp"
#include "core/simulator.hpp"

using json = nlohmann::ordered_json;
using namespace lpscma;

struct lpscma_codebook {
  CodebookSet cbs;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
lpscma_status guard(Fn&& fn) {
  try {
    fn();
    return LPSCMA_OK;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return LPSCMA_ERR_VALIDATION;
  } catch (const std::domain_error& e) {
    g_last_error = e.what();
    return LPSCMA_ERR_VALIDATION;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LPSCMA_ERR_RUNTIME;
  }
}

json parse_config(const char* config_json) {
  if (config_json == nullptr || config_json[0] == '\0') return json::object();
  json cfg = json::parse(config_json, nullptr, false);
  if (cfg.is_discarded()) throw std::invalid_argument("config: not valid JSON");
  if (!cfg.is_object()) throw std::invalid_argument("config: must be a JSON object");
  return cfg;
}

double get_kappa(const json& v) {
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s == "inf" || s == "Inf" || s == "INF") return std::numeric_limits<double>::infinity();
    throw std::invalid_argument("config: kappa string must be \"inf\"");
  }
  double k = v.get<double>();
  if (k < 0.0) throw std::invalid_argument("config: kappa must be >= 0 or \"inf\"");
  return k;
}

std::vector<double> parse_ebn0(const json& v) {
  std::vector<double> grid;
  if (v.is_array()) {
    for (const auto& x : v) grid.push_back(x.get<double>());
  } else if (v.is_number()) {
    grid.push_back(v.get<double>());
  } else if (v.is_string()) {
    // "a:b:step", inclusive of b up to rounding
    std::string s = v.get<std::string>();
    double a, b, step;
    char c1, c2;
    std::istringstream in(s);
    if (!(in >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0.0)
      throw std::invalid_argument("config: ebn0 range must be \"a:b:step\" with step > 0");
    for (double x = a; x <= b + 1e-9; x += step) grid.push_back(x);
  } else {
    throw std::invalid_argument("config: ebn0_db must be a number, an array or \"a:b:step\"");
  }
  if (grid.empty()) throw std::invalid_argument("config: empty Eb/N0 grid");
  return grid;
}

std::string format_double(double v) {
  json j = v;
  return j.dump();
}

SampleOptions sample_options(const json& cfg) {
  SampleOptions so;
  so.q = cfg.value("Q", 10000);
  so.t_max = cfg.value("t_max", 20);
  so.seed = cfg.value("seed", uint64_t(1));
  so.exact_cap = cfg.value("exact_cap", int64_t(4096));
  if (so.q < 2 || so.t_max < 1) throw std::invalid_argument("config: Q must be >= 2 and t_max >= 1");
  return so;
}

json resolved_sample_config(const json& cfg, const SampleOptions& so, double kappa, double ebn0_db,
                            const std::string& mode) {
  json out = cfg;
  out["kappa"] = std::isinf(kappa) ? json("inf") : json(kappa);
  out["ebn0_db"] = ebn0_db;
  out["mode"] = mode;
  out["Q"] = so.q;
  out["t_max"] = so.t_max;
  out["seed"] = so.seed;
  out["exact_cap"] = so.exact_cap;
  return out;
}

}  // namespace

extern "C" {

const char* lpscma_version(void) { return "1.0.0"; }

const char* lpscma_last_error(void) { return g_last_error.c_str(); }

void lpscma_set_threads(int threads) { thread_cap().store(threads < 0 ? 0 : threads); }

void lpscma_string_free(char* s) { std::free(s); }

void lpscma_codebook_free(lpscma_codebook* cb) { delete cb; }

lpscma_status lpscma_codebook_parse(const char* json_text, lpscma_codebook** out) {
  return guard([&] {
    if (json_text == nullptr || out == nullptr) throw std::invalid_argument("parse: null argument");
    auto handle = std::make_unique<lpscma_codebook>();
    handle->cbs = deserialize_codebook(json_text);
    *out = handle.release();
  });
}

lpscma_status lpscma_codebook_load(const char* path, lpscma_codebook** out) {
  return guard([&] {
    if (path == nullptr || out == nullptr) throw std::invalid_argument("load: null argument");
    auto handle = std::make_unique<lpscma_codebook>();
    handle->cbs = load_codebook_file(path);
    *out = handle.release();
  });
}

lpscma_status lpscma_codebook_serialize(const lpscma_codebook* cb, char** json_out) {
  return guard([&] {
    if (cb == nullptr || json_out == nullptr) throw std::invalid_argument("serialize: null argument");
    *json_out = dup_string(serialize_codebook(cb->cbs));
  });
}

lpscma_status lpscma_codebook_save(const lpscma_codebook* cb, const char* path) {
  return guard([&] {
    if (cb == nullptr || path == nullptr) throw std::invalid_argument("save: null argument");
    save_codebook_file(cb->cbs, path);
  });
}

lpscma_status lpscma_design(const char* config_json, lpscma_codebook** out, char** trace_json_out) {
  return guard([&] {
    if (out == nullptr) throw std::invalid_argument("design: null output");
    json cfg = parse_config(config_json);
    DesignOptions opt;
    opt.m = cfg.value("M", 4);
    opt.t = cfg.value("T", 2);
    opt.overload = cfg.value("overload", 150);
    opt.kappa = cfg.contains("kappa") ? get_kappa(cfg["kappa"]) : 20.0;
    opt.ebn0_db = cfg.value("ebn0_db", 16.0);
    opt.opt_iters = cfg.value("opt_iters", 0);
    opt.restarts = cfg.value("restarts", 20);
    opt.q = cfg.value("Q", 1000);
    opt.t_max = cfg.value("t_max", 2);
    opt.perm_restarts = cfg.value("perm_restarts", 8);
    opt.perm_budget = cfg.value("perm_budget", long(200000));
    opt.label_i_max = cfg.value("label_i_max", 20);
    opt.label_restarts = cfg.value("label_restarts", 10);
    opt.seed = cfg.value("seed", uint64_t(1));
    if (std::isinf(opt.kappa)) throw std::invalid_argument("design: kappa must be finite at design time");

    DesignOutput res = design_pipeline(opt);

    json resolved = cfg;
    resolved["M"] = opt.m;
    resolved["T"] = opt.t;
    resolved["overload"] = opt.overload;
    resolved["kappa"] = opt.kappa;
    resolved["ebn0_db"] = opt.ebn0_db;
    resolved["opt_iters"] = opt.opt_iters > 0 ? opt.opt_iters : (opt.overload == 200 ? 25 : 30);
    resolved["restarts"] = opt.restarts;
    resolved["Q"] = opt.q;
    resolved["t_max"] = opt.t_max;
    resolved["perm_restarts"] = opt.perm_restarts;
    resolved["perm_budget"] = opt.perm_budget;
    resolved["label_i_max"] = opt.label_i_max;
    resolved["label_restarts"] = opt.label_restarts;
    resolved["seed"] = opt.seed;
    res.codebook.extra_json = resolved.dump();

    if (trace_json_out != nullptr) {
      json trace;
      trace["objective"] = res.opt.objective;
      trace["branch"] = res.spec.kind == ObjectiveKind::kP21 ? "sum-constellation" : "distance-lower-bound";
      trace["restart_index"] = res.opt.restart_index;
      trace["trace"] = res.opt.trace;
      trace["config"] = resolved;
      *trace_json_out = dup_string(trace.dump(2) + "\n");
    }
    auto handle = std::make_unique<lpscma_codebook>();
    handle->cbs = std::move(res.codebook);
    *out = handle.release();
  });
}

lpscma_status lpscma_label(lpscma_codebook* cb, const char* config_json) {
  return guard([&] {
    if (cb == nullptr) throw std::invalid_argument("label: null codebook");
    json cfg = parse_config(config_json);
    double kappa = cfg.contains("kappa") ? get_kappa(cfg["kappa"]) : cb->cbs.meta.kappa;
    if (std::isinf(kappa)) kappa = 1e9;
    double ebn0 = cfg.value("ebn0_db", cb->cbs.meta.ebn0_db);
    BsaOptions opt;
    opt.i_max = cfg.value("i_max", 20);
    opt.restarts = cfg.value("restarts", 10);
    opt.seed = cfg.value("seed", uint64_t(1));
    label_codebook(cb->cbs, kappa, n0_from_ebn0_db(cb->cbs, ebn0), opt);
  });
}

lpscma_status lpscma_eval(const lpscma_codebook* cb, const char* config_json, char** report_json_out) {
  return guard([&] {
    if (cb == nullptr || report_json_out == nullptr) throw std::invalid_argument("eval: null argument");
    const CodebookSet& cbs = cb->cbs;
    json cfg = parse_config(config_json);
    double kappa = cfg.contains("kappa") ? get_kappa(cfg["kappa"]) : 20.0;
    double kappa_eff = std::isinf(kappa) ? 1e9 : kappa;
    double ebn0_db = cfg.value("ebn0_db", 16.0);
    double n0 = n0_from_ebn0_db(cbs, ebn0_db);
    SampleOptions so = sample_options(cfg);
    std::string mode = cfg.value("mode", "auto");

    uint64_t count = superimposed_count(cbs);
    DeltaMode dm;
    if (mode == "exact") {
      dm = DeltaMode::kExact;
    } else if (mode == "montecarlo") {
      dm = DeltaMode::kMonteCarlo;
    } else if (mode == "auto") {
      dm = count <= static_cast<uint64_t>(so.exact_cap) ? DeltaMode::kExact : DeltaMode::kMonteCarlo;
      mode = dm == DeltaMode::kExact ? "exact" : "montecarlo";
    } else {
      throw std::invalid_argument("eval: mode must be auto, exact or montecarlo");
    }

    json report;
    report["delta_min"] = delta_min(cbs, kappa_eff, n0, dm, so);
    report["med"] = med_superimposed(cbs, so);
    report["mpd"] = mpd_codebook(cbs);
    report["delta_lb"] = delta_lb(cbs, kappa_eff, n0, so).value;
    report["mode"] = mode;
    report["Q"] = so.q;
    report["t_max"] = so.t_max;
    report["seed"] = so.seed;
    report["kappa"] = std::isinf(kappa) ? json("inf") : json(kappa);
    report["ebn0_db"] = ebn0_db;
    report["config"] = resolved_sample_config(cfg, so, kappa, ebn0_db, mode);
    *report_json_out = dup_string(report.dump(2) + "\n");
  });
}

lpscma_status lpscma_simulate(const lpscma_codebook* cb, const char* config_json, char** csv_out) {
  return guard([&] {
    if (cb == nullptr || csv_out == nullptr) throw std::invalid_argument("simulate: null argument");
    json cfg = parse_config(config_json);
    BerOptions opt;
    opt.ebn0_db = parse_ebn0(cfg.contains("ebn0_db") ? cfg["ebn0_db"] : json(12.0));
    if (cfg.contains("kappa")) {
      if (cfg["kappa"].is_array())
        for (const auto& k : cfg["kappa"]) opt.kappas.push_back(get_kappa(k));
      else
        opt.kappas.push_back(get_kappa(cfg["kappa"]));
    } else {
      opt.kappas.push_back(std::numeric_limits<double>::infinity());
    }
    opt.frames = cfg.value("frames", int64_t(10000));
    opt.max_iters = cfg.value("max_iters", 10);
    opt.tol = cfg.value("tol", 1e-5);
    std::string decoder = cfg.value("decoder", "lp-mpa");
    if (decoder != "mpa" && decoder != "lp-mpa")
      throw std::invalid_argument("simulate: decoder must be mpa or lp-mpa");
    opt.use_lp = decoder == "lp-mpa";
    opt.seed = cfg.value("seed", uint64_t(1));
    if (opt.frames < 1) throw std::invalid_argument("simulate: frames must be >= 1");

    std::vector<BerPoint> table = ber_sweep(cb->cbs, opt);

    json resolved = cfg;
    resolved["frames"] = opt.frames;
    resolved["max_iters"] = opt.max_iters;
    resolved["tol"] = opt.tol;
    resolved["decoder"] = decoder;
    resolved["seed"] = opt.seed;

    std::string csv = "# config " + resolved.dump() + "\n";
    csv += "ebn0_db,kappa,frames,bit_errors,ber,ci_low,ci_high,avg_iters,n_mult,n_add,seed\n";
    for (const BerPoint& p : table) {
      csv += format_double(p.ebn0_db) + ",";
      csv += (std::isinf(p.kappa) ? std::string("inf") : format_double(p.kappa)) + ",";
      csv += std::to_string(p.frames) + "," + std::to_string(p.bit_errors) + ",";
      csv += format_double(p.ber) + "," + format_double(p.ci_low) + "," + format_double(p.ci_high) + ",";
      csv += format_double(p.avg_iters) + ",";
      csv += std::to_string(p.n_mult) + "," + std::to_string(p.n_add) + ",";
      csv += std::to_string(p.seed) + "\n";
    }
    *csv_out = dup_string(csv);
  });
}

lpscma_status lpscma_complexity(const char* config_json, char** report_json_out) {
  return guard([&] {
    if (report_json_out == nullptr) throw std::invalid_argument("complexity: null output");
    json cfg = parse_config(config_json);
    auto params_from = [](const json& v) {
      MpaParams p;
      p.t = v.at("T").get<int>();
      p.d_f = v.at("d_f").get<int>();
      p.n = v.at("N").get<int>();
      p.j = v.at("J").get<int>();
      p.i_t = v.at("I_t").get<int>();
      return p;
    };
    if (!cfg.contains("lp")) throw std::invalid_argument("complexity: missing 'lp' parameter block");
    MpaParams lp = params_from(cfg["lp"]);
    json report;
    OpCounts lc = mpa_op_counts(lp);
    report["lp"] = {{"T", lp.t}, {"d_f", lp.d_f}, {"N", lp.n}, {"J", lp.j}, {"I_t", lp.i_t},
                    {"N_m", lc.n_mult}, {"N_a", lc.n_add}};
    if (cfg.contains("baseline")) {
      MpaParams base = params_from(cfg["baseline"]);
      ComplexityReport r = crr(lp, base);
      report["baseline"] = {{"T", base.t}, {"d_f", base.d_f}, {"N", base.n}, {"J", base.j},
                            {"I_t", base.i_t}, {"N_m", r.baseline_counts.n_mult},
                            {"N_a", r.baseline_counts.n_add}};
      report["crr_mult"] = r.crr_mult;
      report["crr_add"] = r.crr_add;
    }
    report["config"] = cfg;
    *report_json_out = dup_string(report.dump(2) + "\n");
  });
}

lpscma_status lpscma_validate(const char* path, char** report_json_out) {
  return guard([&] {
    if (path == nullptr || report_json_out == nullptr) throw std::invalid_argument("validate: null argument");
    json report;
    report["file"] = path;
    try {
      CodebookSet cbs = load_codebook_file(path);  // parses and runs validate()
      report["valid"] = true;
      report["M"] = cbs.M;
      report["K"] = cbs.K;
      report["J"] = cbs.J;
      report["N"] = cbs.N;
      report["overload"] = cbs.overload;
      report["T"] = cbs.meta.t;
      report["mean_user_energy"] = cbs.mean_user_energy();
      report["product_structured"] = product_structured(cbs);
      auto imbalance = power_imbalance_holds(cbs);
      report["power_imbalance_holds"] = imbalance.has_value() ? json(*imbalance) : json(nullptr);
    } catch (const std::exception& e) {
      report["valid"] = false;
      report["error"] = e.what();
    }
    *report_json_out = dup_string(report.dump(2) + "\n");
  });
}

}  // extern "C"
