// Command-line front end. Everything goes through the shared-library C API;
// this translation unit only parses flags, merges the optional config file
// and moves bytes to disk.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lpscma/lpscma.h"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

int status_to_exit(lpscma_status st) {
  if (st == LPSCMA_OK) return 0;
  return st == LPSCMA_ERR_VALIDATION ? kExitValidation : kExitRuntime;
}

int fail(lpscma_status st) {
  std::cerr << "error: " << lpscma_last_error() << "\n";
  return status_to_exit(st);
}

json load_config_file(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open config file " << path << "\n";
    std::exit(kExitValidation);
  }
  json cfg = json::parse(in, nullptr, false);
  if (cfg.is_discarded() || !cfg.is_object()) {
    std::cerr << "error: config file " << path << " is not a JSON object\n";
    std::exit(kExitValidation);
  }
  return cfg;
}

bool write_file(const std::string& path, const std::string& content) {
  fs::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << content;
  return out.good();
}

struct OwnedString {
  char* ptr = nullptr;
  ~OwnedString() { lpscma_string_free(ptr); }
  std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

struct OwnedCodebook {
  lpscma_codebook* ptr = nullptr;
  ~OwnedCodebook() { lpscma_codebook_free(ptr); }
};

// flags win over config-file values
void put_if(json& cfg, const std::string& key, const std::optional<double>& v) {
  if (v) cfg[key] = *v;
}
void put_if(json& cfg, const std::string& key, const std::optional<int64_t>& v) {
  if (v) cfg[key] = *v;
}
void put_if(json& cfg, const std::string& key, const std::optional<std::string>& v) {
  if (v) cfg[key] = *v;
}

void put_kappa(json& cfg, const std::optional<std::string>& v) {
  if (!v) return;
  if (*v == "inf")
    cfg["kappa"] = "inf";
  else
    cfg["kappa"] = std::stod(*v);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse codebook designer, evaluator and link simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<int64_t> seed;
  std::optional<int64_t> threads;
  std::string out_dir = ".";
  app.add_option("--config", config_path, "JSON config file; flags override its values");
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--threads", threads, "worker cap (0 = all cores)");
  app.add_option("--out", out_dir, "output directory");

  // design
  auto* design = app.add_subcommand("design", "construct and optimize a codebook");
  std::optional<int64_t> d_m, d_t, d_overload, d_restarts, d_iters;
  std::optional<std::string> d_kappa;
  std::optional<double> d_ebn0;
  design->add_option("-M,--order", d_m, "modulation order");
  design->add_option("-T,--projections", d_t, "distinct values per dimension");
  design->add_option("--overload", d_overload, "overloading percent (150 or 200)");
  design->add_option("--kappa", d_kappa, "design-time Rician factor");
  design->add_option("--ebn0", d_ebn0, "design-time Eb/N0 in dB");
  design->add_option("--restarts", d_restarts, "optimizer restarts");
  design->add_option("--opt-iters", d_iters, "optimizer sweeps per restart");

  // label
  auto* label = app.add_subcommand("label", "re-run bit labeling on a codebook file");
  std::string l_file;
  std::optional<std::string> l_kappa;
  std::optional<double> l_ebn0;
  label->add_option("codebook", l_file, "codebook JSON file")->required();
  label->add_option("--kappa", l_kappa, "Rician factor (or inf)");
  label->add_option("--ebn0", l_ebn0, "Eb/N0 in dB");

  // eval
  auto* eval = app.add_subcommand("eval", "distance metric report for a codebook file");
  std::string e_file;
  std::optional<std::string> e_kappa, e_mode;
  std::optional<double> e_ebn0;
  std::optional<int64_t> e_q, e_tmax;
  eval->add_option("codebook", e_file, "codebook JSON file")->required();
  eval->add_option("--kappa", e_kappa, "Rician factor (or inf)");
  eval->add_option("--ebn0", e_ebn0, "Eb/N0 in dB");
  eval->add_option("--mode", e_mode, "auto | exact | montecarlo");
  eval->add_option("--Q", e_q, "sample points per round");
  eval->add_option("--t-max", e_tmax, "sampling rounds");

  // simulate
  auto* sim = app.add_subcommand("simulate", "uncoded BER sweep");
  std::string s_file;
  std::optional<std::string> s_kappa, s_ebn0, s_decoder;
  std::optional<int64_t> s_frames, s_iters;
  std::optional<double> s_tol;
  sim->add_option("codebook", s_file, "codebook JSON file")->required();
  sim->add_option("--kappa", s_kappa, "Rician factor (or inf)");
  sim->add_option("--ebn0", s_ebn0, "Eb/N0 grid \"a:b:step\" or single value");
  sim->add_option("--frames", s_frames, "frames per grid point");
  sim->add_option("--decoder", s_decoder, "mpa | lp-mpa");
  sim->add_option("--max-iters", s_iters, "decoder iteration cap");
  sim->add_option("--tol", s_tol, "decoder convergence tolerance");

  // complexity
  auto* cx = app.add_subcommand("complexity", "decoder operation counts and reduction ratio");
  std::optional<std::string> c_file;
  std::optional<int64_t> c_t, c_df, c_n, c_j, c_it, c_bt, c_bit;
  cx->add_option("codebook", c_file, "optional codebook file supplying T, d_f, N, J");
  cx->add_option("--T", c_t, "projected values");
  cx->add_option("--df", c_df, "colliding users per resource");
  cx->add_option("--N", c_n, "nonzero dimensions");
  cx->add_option("--J", c_j, "users");
  cx->add_option("--iters", c_it, "decoder iterations");
  cx->add_option("--baseline-T", c_bt, "baseline projected values");
  cx->add_option("--baseline-iters", c_bit, "baseline decoder iterations");

  // validate
  auto* val = app.add_subcommand("validate", "structural checks on a codebook file");
  std::string v_file;
  val->add_option("codebook", v_file, "codebook JSON file")->required();

  CLI11_PARSE(app, argc, argv);

  if (threads) lpscma_set_threads(static_cast<int>(*threads));
  json cfg = load_config_file(config_path);
  put_if(cfg, "seed", seed);

  if (design->parsed()) {
    put_if(cfg, "M", d_m);
    put_if(cfg, "T", d_t);
    put_if(cfg, "overload", d_overload);
    put_kappa(cfg, d_kappa);
    put_if(cfg, "ebn0_db", d_ebn0);
    put_if(cfg, "restarts", d_restarts);
    put_if(cfg, "opt_iters", d_iters);

    OwnedCodebook cb;
    OwnedString trace;
    lpscma_status st = lpscma_design(cfg.dump().c_str(), &cb.ptr, &trace.ptr);
    if (st != LPSCMA_OK) return fail(st);

    OwnedString text;
    st = lpscma_codebook_serialize(cb.ptr, &text.ptr);
    if (st != LPSCMA_OK) return fail(st);

    std::string cb_path = (fs::path(out_dir) / "codebook.json").string();
    std::string tr_path = (fs::path(out_dir) / "design_trace.json").string();
    if (!write_file(cb_path, text.str()) || !write_file(tr_path, trace.str())) {
      std::cerr << "error: cannot write outputs under " << out_dir << "\n";
      return kExitRuntime;
    }
    std::cout << cb_path << "\n" << tr_path << "\n";
    return 0;
  }

  if (label->parsed()) {
    OwnedCodebook cb;
    lpscma_status st = lpscma_codebook_load(l_file.c_str(), &cb.ptr);
    if (st != LPSCMA_OK) return fail(st);
    put_kappa(cfg, l_kappa);
    put_if(cfg, "ebn0_db", l_ebn0);
    st = lpscma_label(cb.ptr, cfg.dump().c_str());
    if (st != LPSCMA_OK) return fail(st);
    std::string out_path = (fs::path(out_dir) / fs::path(l_file).filename()).string();
    st = lpscma_codebook_save(cb.ptr, out_path.c_str());
    if (st != LPSCMA_OK) return fail(st);
    std::cout << out_path << "\n";
    return 0;
  }

  if (eval->parsed()) {
    OwnedCodebook cb;
    lpscma_status st = lpscma_codebook_load(e_file.c_str(), &cb.ptr);
    if (st != LPSCMA_OK) return fail(st);
    put_kappa(cfg, e_kappa);
    put_if(cfg, "ebn0_db", e_ebn0);
    put_if(cfg, "mode", e_mode);
    put_if(cfg, "Q", e_q);
    put_if(cfg, "t_max", e_tmax);
    OwnedString report;
    st = lpscma_eval(cb.ptr, cfg.dump().c_str(), &report.ptr);
    if (st != LPSCMA_OK) return fail(st);
    std::string out_path = (fs::path(out_dir) / "metrics.json").string();
    if (!write_file(out_path, report.str())) return kExitRuntime;
    std::cout << report.str();
    return 0;
  }

  if (sim->parsed()) {
    OwnedCodebook cb;
    lpscma_status st = lpscma_codebook_load(s_file.c_str(), &cb.ptr);
    if (st != LPSCMA_OK) return fail(st);
    if (s_kappa) {
      json arr = json::array();
      std::stringstream ss(*s_kappa);
      std::string item;
      while (std::getline(ss, item, ',')) arr.push_back(item == "inf" ? json("inf") : json(std::stod(item)));
      cfg["kappa"] = arr;
    }
    put_if(cfg, "ebn0_db", s_ebn0);
    put_if(cfg, "frames", s_frames);
    put_if(cfg, "decoder", s_decoder);
    put_if(cfg, "max_iters", s_iters);
    put_if(cfg, "tol", s_tol);
    OwnedString csv;
    st = lpscma_simulate(cb.ptr, cfg.dump().c_str(), &csv.ptr);
    if (st != LPSCMA_OK) return fail(st);
    std::string out_path = (fs::path(out_dir) / "ber.csv").string();
    if (!write_file(out_path, csv.str())) return kExitRuntime;
    std::cout << csv.str();
    return 0;
  }

  if (cx->parsed()) {
    if (c_file) {
      OwnedCodebook cb;
      OwnedString text;
      lpscma_status st = lpscma_codebook_load(c_file->c_str(), &cb.ptr);
      if (st != LPSCMA_OK) return fail(st);
      st = lpscma_codebook_serialize(cb.ptr, &text.ptr);
      if (st != LPSCMA_OK) return fail(st);
      json doc = json::parse(text.str());
      int df = 0;
      for (const auto& v : doc["F"][0]) df += v.get<int>();
      cfg["lp"] = {{"T", doc["design_meta"]["T"]}, {"d_f", df}, {"N", doc["N"]}, {"J", doc["J"]},
                   {"I_t", c_it.value_or(1)}};
      if (c_bt || c_bit) {
        json base = cfg["lp"];
        base["T"] = c_bt ? json(*c_bt) : doc["M"];
        base["I_t"] = c_bit.value_or(c_it.value_or(1));
        cfg["baseline"] = base;
      }
    } else if (c_t && c_df && c_n && c_j && c_it) {
      cfg["lp"] = {{"T", *c_t}, {"d_f", *c_df}, {"N", *c_n}, {"J", *c_j}, {"I_t", *c_it}};
      if (c_bt && c_bit) {
        cfg["baseline"] = {{"T", *c_bt}, {"d_f", *c_df}, {"N", *c_n}, {"J", *c_j}, {"I_t", *c_bit}};
      }
    } else if (!cfg.contains("lp")) {
      std::cerr << "error: complexity needs a codebook file or --T --df --N --J --iters\n";
      return kExitValidation;
    }
    OwnedString report;
    lpscma_status st = lpscma_complexity(cfg.dump().c_str(), &report.ptr);
    if (st != LPSCMA_OK) return fail(st);
    std::string out_path = (fs::path(out_dir) / "complexity.json").string();
    if (!write_file(out_path, report.str())) return kExitRuntime;
    std::cout << report.str();
    return 0;
  }

  if (val->parsed()) {
    OwnedString report;
    lpscma_status st = lpscma_validate(v_file.c_str(), &report.ptr);
    if (st != LPSCMA_OK) return fail(st);
    std::cout << report.str();
    json doc = json::parse(report.str());
    return doc.value("valid", false) ? 0 : kExitValidation;
  }

  return 0;
}
