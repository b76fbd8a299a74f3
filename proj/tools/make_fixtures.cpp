// Regenerates the bundled reference codebooks under fixtures/. The entries
// are the published low-projection codebooks for the 4x6 and 5x10 systems;
// labels follow the natural binary column order. Run from the repo root:
//   build/tools/lpscma-make-fixtures [out_dir]

#include <iostream>
#include <vector>

#include "core/codebook.hpp"
#include "core/codebook_io.hpp"

using namespace lpscma;

namespace {

using Row = std::vector<cd>;

UserCodebook make_user(int k, const std::vector<Row>& codewords) {
  UserCodebook u;
  const int m = static_cast<int>(codewords.size());
  u.x.assign(static_cast<size_t>(k) * m, cd(0.0, 0.0));
  for (int mm = 0; mm < m; ++mm)
    for (int kk = 0; kk < k; ++kk) u.x[static_cast<size_t>(kk) * m + mm] = codewords[mm][kk];
  u.labels.resize(m);
  for (int mm = 0; mm < m; ++mm) u.labels[mm] = static_cast<uint32_t>(mm);
  return u;
}

CodebookSet make_set(int m, int overload, int t, const std::vector<std::vector<Row>>& users) {
  CodebookSet cbs;
  cbs.fg = builtin_factor_graph(overload);
  cbs.M = m;
  cbs.K = cbs.fg.resources;
  cbs.J = cbs.fg.users;
  cbs.N = cbs.fg.col_weight;
  cbs.overload = overload;
  for (const auto& u : users) cbs.users.push_back(make_user(cbs.K, u));
  cbs.meta.t = t;
  cbs.meta.kappa = 20.0;
  cbs.meta.ebn0_db = 16.0;
  cbs.validate();
  return cbs;
}

CodebookSet lp4x3_150() {
  const cd a(0.0850, 1.0324), b(1.0841, 0.0), c(-0.7156, 0.4894), z(0.0, 0.0);
  std::vector<std::vector<Row>> users = {
      {{z, a, z, z}, {z, z, z, b}, {z, z, z, -b}, {z, -a, z, z}},
      {{a, z, z, z}, {z, z, b, z}, {z, z, -b, z}, {-a, z, z, z}},
      {{c, z, z, z}, {z, c, z, z}, {z, -c, z, z}, {-c, z, z, z}},
      {{z, z, c, z}, {z, z, z, c}, {z, z, z, -c}, {z, z, -c, z}},
      {{b, z, z, z}, {z, z, z, a}, {z, z, z, -a}, {-b, z, z, z}},
      {{z, b, z, z}, {z, z, a, z}, {z, z, -a, z}, {z, -b, z, z}},
  };
  return make_set(4, 150, 3, users);
}

CodebookSet lp4x2_200() {
  const cd p(0.6576, 0.6755), q(0.5852, -0.5696), r(-0.1282, 0.4536), s(-0.3288, -0.3378);
  const cd z(0.0, 0.0);
  std::vector<std::vector<Row>> users = {
      {{p, q, z, z, z}, {p, -q, z, z, z}, {-p, q, z, z, z}, {-p, -q, z, z, z}},
      {{r, z, s, z, z}, {r, z, -s, z, z}, {-r, z, s, z, z}, {-r, z, -s, z, z}},
      {{-s, z, z, -r, z}, {-s, z, z, r, z}, {s, z, z, -r, z}, {s, z, z, r, z}},
      {{-q, z, z, z, -p}, {-q, z, z, z, p}, {q, z, z, z, -p}, {q, z, z, z, p}},
      {{z, p, q, z, z}, {z, p, -q, z, z}, {z, -p, q, z, z}, {z, -p, -q, z, z}},
      {{z, r, z, s, z}, {z, r, z, -s, z}, {z, -r, z, s, z}, {z, -r, z, -s, z}},
      {{z, -s, z, z, -r}, {z, -s, z, z, r}, {z, s, z, z, -r}, {z, s, z, z, r}},
      {{z, z, p, q, z}, {z, z, p, -q, z}, {z, z, -p, q, z}, {z, z, -p, -q, z}},
      {{z, z, r, z, s}, {z, z, r, z, -s}, {z, z, -r, z, s}, {z, z, -r, z, -s}},
      {{z, z, z, p, q}, {z, z, z, p, -q}, {z, z, z, -p, q}, {z, z, z, -p, -q}},
  };
  return make_set(4, 200, 2, users);
}

CodebookSet lp8x4_150() {
  const cd g1(0.3202, 0.3995), g2(-0.1187, 0.5316);
  const cd h1(0.0863, -0.7668), h2(-0.6940, 0.4385);
  const cd w1(-0.7410, -0.0249), w2(-0.4723, -0.6317);
  const cd z(0.0, 0.0);

  auto spread = [](const std::vector<std::pair<cd, cd>>& pairs, int k, int lo, int hi) {
    std::vector<Row> rows;
    for (const auto& [x, y] : pairs) {
      Row row(k, cd(0.0, 0.0));
      row[lo] = x;
      row[hi] = y;
      rows.push_back(row);
    }
    return rows;
  };
  (void)z;

  const std::vector<std::pair<cd, cd>> vg = {{g1, h1},  {g1, h2},  {g2, -h2},  {g2, -h1},
                                             {-g2, h1}, {-g2, h2}, {-g1, -h2}, {-g1, -h1}};
  const std::vector<std::pair<cd, cd>> vw = {{w1, -w1},  {w1, w2},  {w2, -w2},  {w2, w1},
                                             {-w2, -w1}, {-w2, w2}, {-w1, -w2}, {-w1, w1}};
  const std::vector<std::pair<cd, cd>> vh = {{-h1, -g1}, {-h1, g2}, {h2, -g2}, {h2, g1},
                                             {-h2, -g1}, {-h2, g2}, {h1, -g2}, {h1, g1}};
  std::vector<std::vector<Row>> users = {
      spread(vg, 4, 1, 3), spread(vg, 4, 0, 2), spread(vw, 4, 0, 1),
      spread(vw, 4, 2, 3), spread(vh, 4, 0, 3), spread(vh, 4, 1, 2),
  };
  return make_set(8, 150, 4, users);
}

}  // namespace

int main(int argc, char** argv) {
  std::string dir = argc > 1 ? argv[1] : "fixtures";
  save_codebook_file(lp4x3_150(), dir + "/lp4x3_150.json");
  save_codebook_file(lp4x2_200(), dir + "/lp4x2_200.json");
  save_codebook_file(lp8x4_150(), dir + "/lp8x4_150.json");
  std::cout << "wrote 3 codebooks to " << dir << "\n";
  return 0;
}
