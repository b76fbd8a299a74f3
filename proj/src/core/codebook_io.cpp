#include "core/codebook_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace lpscma {

using json = nlohmann::ordered_json;

namespace {

const json& require(const json& obj, const char* field, const char* where) {
  auto it = obj.find(field);
  if (it == obj.end())
    throw std::invalid_argument(std::string("codebook file: missing field '") + field + "' in " + where);
  return *it;
}

std::string label_string(uint32_t label, int bits) {
  std::string s(bits, '0');
  for (int b = 0; b < bits; ++b)
    if (label & (1u << (bits - 1 - b))) s[b] = '1';
  return s;
}

uint32_t parse_label(const std::string& s, int bits, int user_id) {
  if (static_cast<int>(s.size()) != bits)
    throw std::invalid_argument("codebook file: label '" + s + "' of user " + std::to_string(user_id) +
                                " must have log2(M) bits");
  uint32_t v = 0;
  for (char c : s) {
    if (c != '0' && c != '1') throw std::invalid_argument("codebook file: label '" + s + "' is not binary");
    v = (v << 1) | (c == '1' ? 1u : 0u);
  }
  return v;
}

}  // namespace

std::string serialize_codebook(const CodebookSet& cbs) {
  json root;
  root["M"] = cbs.M;
  root["K"] = cbs.K;
  root["J"] = cbs.J;
  root["N"] = cbs.N;
  root["overload"] = cbs.overload;
  json f = json::array();
  for (int k = 0; k < cbs.K; ++k) {
    json row = json::array();
    for (int j = 0; j < cbs.J; ++j) row.push_back(static_cast<int>(cbs.fg.at(k, j)));
    f.push_back(std::move(row));
  }
  root["F"] = std::move(f);

  const int bits = cbs.bits_per_symbol();
  json users = json::array();
  for (int j = 0; j < cbs.J; ++j) {
    json u;
    u["id"] = j + 1;
    json codewords = json::array();
    for (int m = 0; m < cbs.M; ++m) {
      json col = json::array();
      for (int k = 0; k < cbs.K; ++k) {
        cd v = cbs.user_at(j, k, m);
        col.push_back(json::array({v.real(), v.imag()}));
      }
      codewords.push_back(std::move(col));
    }
    u["codewords"] = std::move(codewords);
    json labels = json::array();
    for (int m = 0; m < cbs.M; ++m) labels.push_back(label_string(cbs.users[j].labels[m], bits));
    u["labels"] = std::move(labels);
    users.push_back(std::move(u));
  }
  root["users"] = std::move(users);

  json meta;
  meta["T"] = cbs.meta.t;
  meta["kappa"] = cbs.meta.kappa;
  meta["ebn0_db"] = cbs.meta.ebn0_db;
  meta["rho"] = cbs.meta.rho;
  meta["phi"] = cbs.meta.phi;
  meta["E"] = cbs.meta.energies;
  meta["theta"] = cbs.meta.thetas;
  root["design_meta"] = std::move(meta);

  if (!cbs.extra_json.empty()) root["config"] = json::parse(cbs.extra_json);
  return root.dump(2) + "\n";
}

CodebookSet deserialize_codebook(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("codebook file: not valid JSON: ") + e.what());
  }

  CodebookSet cbs;
  cbs.M = require(root, "M", "root").get<int>();
  cbs.K = require(root, "K", "root").get<int>();
  cbs.J = require(root, "J", "root").get<int>();
  cbs.N = require(root, "N", "root").get<int>();
  cbs.overload = require(root, "overload", "root").get<int>();

  const json& f = require(root, "F", "root");
  if (static_cast<int>(f.size()) != cbs.K) throw std::invalid_argument("codebook file: F must have K rows");
  std::vector<uint8_t> fm;
  fm.reserve(static_cast<size_t>(cbs.K) * cbs.J);
  for (const auto& row : f) {
    if (static_cast<int>(row.size()) != cbs.J) throw std::invalid_argument("codebook file: F must have J columns");
    for (const auto& v : row) {
      int b = v.get<int>();
      if (b != 0 && b != 1) throw std::invalid_argument("codebook file: F entries must be 0 or 1");
      fm.push_back(static_cast<uint8_t>(b));
    }
  }
  cbs.fg = FactorGraph::from_matrix(cbs.K, cbs.J, fm);

  const json& users = require(root, "users", "root");
  if (static_cast<int>(users.size()) != cbs.J)
    throw std::invalid_argument("codebook file: users array must have J entries");
  const int bits = cbs.bits_per_symbol();
  cbs.users.resize(cbs.J);
  int uidx = 0;
  for (const auto& u : users) {
    int id = require(u, "id", "users[]").get<int>();
    if (id != uidx + 1) throw std::invalid_argument("codebook file: user ids must be 1..J in order");
    auto& uc = cbs.users[uidx];
    uc.x.assign(static_cast<size_t>(cbs.K) * cbs.M, cd(0.0, 0.0));
    const json& codewords = require(u, "codewords", "users[]");
    if (static_cast<int>(codewords.size()) != cbs.M)
      throw std::invalid_argument("codebook file: each user needs M codewords");
    for (int m = 0; m < cbs.M; ++m) {
      const json& col = codewords[m];
      if (static_cast<int>(col.size()) != cbs.K)
        throw std::invalid_argument("codebook file: each codeword needs K entries");
      for (int k = 0; k < cbs.K; ++k) {
        const json& entry = col[k];
        if (!entry.is_array() || entry.size() != 2)
          throw std::invalid_argument("codebook file: complex entries must be [re, im] pairs");
        uc.x[static_cast<size_t>(k) * cbs.M + m] = cd(entry[0].get<double>(), entry[1].get<double>());
      }
    }
    const json& labels = require(u, "labels", "users[]");
    if (static_cast<int>(labels.size()) != cbs.M)
      throw std::invalid_argument("codebook file: each user needs M labels");
    uc.labels.resize(cbs.M);
    for (int m = 0; m < cbs.M; ++m) uc.labels[m] = parse_label(labels[m].get<std::string>(), bits, id);
    ++uidx;
  }

  const json& meta = require(root, "design_meta", "root");
  cbs.meta.t = require(meta, "T", "design_meta").get<int>();
  cbs.meta.kappa = require(meta, "kappa", "design_meta").get<double>();
  cbs.meta.ebn0_db = require(meta, "ebn0_db", "design_meta").get<double>();
  cbs.meta.rho = require(meta, "rho", "design_meta").get<double>();
  cbs.meta.phi = require(meta, "phi", "design_meta").get<double>();
  cbs.meta.energies = require(meta, "E", "design_meta").get<std::vector<double>>();
  cbs.meta.thetas = require(meta, "theta", "design_meta").get<std::vector<double>>();

  if (auto it = root.find("config"); it != root.end()) cbs.extra_json = it->dump();

  cbs.validate();
  return cbs;
}

CodebookSet load_codebook_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open codebook file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return deserialize_codebook(ss.str());
}

void save_codebook_file(const CodebookSet& cbs, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write codebook file: " + path);
  out << serialize_codebook(cbs);
}

}  // namespace lpscma
