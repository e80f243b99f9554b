#include "dgforge/tower.hpp"

#include <algorithm>
#include <set>

#include "dgforge/error.hpp"

namespace dgforge {

namespace {

// Cocycle representatives of H^q(x e_i) spread to the ambient basis.
std::vector<SparseVec> representatives(const DgModule& x, int q, int i) {
  std::vector<SparseVec> out;
  auto block = x.indices_in_block(q, i);
  Matrix reps = x.complex(i).homology_representatives(q);
  for (std::size_t col = 0; col < reps.cols(); ++col) {
    SparseVec v;
    for (std::size_t r = 0; r < block.size(); ++r)
      if (!reps(r, col).is_zero()) v.push_back({static_cast<int>(block[r]), reps(r, col)});
    out.push_back(std::move(v));
  }
  return out;
}

// Rank of the induced map in degree q (0 when absent).
std::size_t rank_at(const std::map<int, std::size_t>& ranks, int q) {
  auto it = ranks.find(q);
  return it == ranks.end() ? 0 : it->second;
}

}  // namespace

bool Tower::all_surjective() const {
  return std::all_of(stages.begin(), stages.end(), [](const TowerStage& s) { return s.surjective; });
}

bool Tower::all_transitions_vanish() const {
  return std::all_of(stages.begin(), stages.end(), [](const TowerStage& s) {
    return !s.transition_vanishes || *s.transition_vanishes;
  });
}

Tower aisle_tower(const ModulePtr& m, int stages) {
  const AlgebraPtr& alg = m->algebra();
  alg->require_class_p("aisle tower");
  m->require_valid();
  if (stages < 1) throw Error(ErrorKind::Precondition, "the tower needs at least one stage");
  const int r = alg->num_idempotents();
  const HomologyTable hm = homology(*m);

  std::vector<Cell> cells;
  ModuleCochain pi;
  for (int i = 0; i < r; ++i)
    for (const auto& [q, row] : hm.dims) {
      if (q > 0 || hm.at(q, i) == 0) continue;
      for (auto& v : representatives(*m, q, i)) {
        cells.push_back({i, -q});
        pi.push_back(std::move(v));
      }
    }
  const int n0 = static_cast<int>(cells.size());
  TwistedComplex x(alg, std::move(cells), CellMatrix(n0, n0));

  Tower out;
  ModulePtr previous_cone;
  int previous_rx = 0;
  ModuleMap last_map;
  for (int idx = 0; idx < stages; ++idx) {
    ModulePtr rx = share(realize(x));
    ModuleMap map = realize_cochain(x, pi, 0, rx, m);
    if (!map.is_chain_map() || !map.is_a_linear())
      throw Error(ErrorKind::Internal, "tower map is not a closed A-linear map");
    ConeResult c = cone(map);
    TowerStage stage{idx, x, pi, homology(*c.cone), {}, true, 0, std::nullopt};
    const auto ranks = induced_ranks(map);
    for (const auto& [q, row] : hm.dims) {
      if (q > 0) continue;
      SurjectivityEntry e{-q, rank_at(ranks, q), hm.total(q)};
      stage.surjective = stage.surjective && e.rank == e.target;
      stage.surjectivity.push_back(e);
    }
    if (previous_cone) {
      // (s x, y) -> (s f x, y); the old cells come first in the new stage.
      const int dim_prev = previous_cone->dim();
      Matrix t(m->field(), c.cone->dim(), dim_prev);
      for (int a = 0; a < dim_prev; ++a) {
        const int b = a < previous_rx ? a : a - previous_rx + rx->dim();
        t(b, a) = Scalar(m->field(), 1);
      }
      ModuleMap transition{previous_cone, c.cone, 0, std::move(t)};
      if (!transition.is_chain_map()) throw Error(ErrorKind::Internal, "tower transition is not a chain map");
      bool vanish = true;
      for (const auto& [q, count] : induced_ranks(transition))
        if (q <= 0 && count != 0) vanish = false;
      out.stages.back().transition_vanishes = vanish;
    }

    // Cells against H^{q}(Y_i) for q <= 0.
    std::vector<std::pair<int, SparseVec>> new_columns;
    for (int i = 0; i < r; ++i)
      for (const auto& [q, row] : stage.cone_homology.dims) {
        if (q > 0 || stage.cone_homology.at(q, i) == 0) continue;
        for (auto& v : representatives(*c.cone, q, i)) new_columns.push_back({i, std::move(v)});
      }
    stage.attached = static_cast<int>(new_columns.size());
    out.stages.push_back(stage);
    last_map = map;
    if (new_columns.empty()) {
      out.stabilized_at = idx;
      out.stages.back().transition_vanishes = true;  // H^{<=0}(Y_i) = 0
      break;
    }
    if (idx + 1 == stages) break;

    const auto layout = realized_layout(x);
    const int offset = rx->dim();
    const int old = x.size();
    const int n = old + static_cast<int>(new_columns.size());
    std::vector<Cell> next_cells = x.cells();
    CellMatrix delta(n, n);
    for (int t = 0; t < old; ++t)
      for (int s = 0; s < old; ++s) delta.at(t, s) = x.delta().at(t, s);
    ModuleCochain next_pi = pi;
    for (std::size_t j = 0; j < new_columns.size(); ++j) {
      const auto& [i, z] = new_columns[j];
      const int s = old + static_cast<int>(j);
      // z sits in degree q of the cone; the new cell has shift -q.
      const int q = c.cone->element(z.front().index).degree;
      next_cells.push_back({i, -q});
      SparseVec y;
      for (const auto& term : z) {
        if (term.index < offset) {
          const auto [t, b] = layout[term.index];
          axpy(delta.at(t, s), term.coef, unit_vec(m->field(), b));
        } else {
          y.push_back({term.index - offset, -term.coef});
        }
      }
      next_pi.push_back(std::move(y));
    }
    x = TwistedComplex(alg, std::move(next_cells), std::move(delta));
    if (!x.is_valid()) throw Error(ErrorKind::Internal, "tower cells break Maurer-Cartan");
    pi = std::move(next_pi);
    previous_cone = c.cone;
    previous_rx = offset;
  }

  if (out.stabilized_at) {
    const auto& last = out.stages.back();
    const auto ranks = induced_ranks(last_map);
    const HomologyTable hx = homology(*last_map.source);
    std::set<int> degrees;
    for (const auto& [q, row] : hm.dims) degrees.insert(q);
    for (const auto& [q, row] : hx.dims) degrees.insert(q);
    bool iso_low = true;
    for (int q : degrees)
      if (q <= 0 && (rank_at(ranks, q) != hm.total(q) || rank_at(ranks, q) != hx.total(q)))
        iso_low = false;
    const bool cone_positive = last.cone_homology.empty() || *last.cone_homology.bottom() > 0;
    out.truncation_certified = iso_low && cone_positive;
    out.quasi_iso = is_quasi_iso(last_map);
  }
  return out;
}

}  // namespace dgforge
