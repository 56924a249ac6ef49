#include <ostream>

#include "bmcopula/cli.hpp"
#include "bmcopula/csv.hpp"
#include "bmcopula/parallel.hpp"

namespace bmcopula::cli {

GridValues evaluate_grid(const GridSpec& g, const CopulaKind& kind, bool density) {
  validate(g);
  const QuantileCache cache(kind);
  GridValues gv;
  gv.grid = g;
  gv.values.resize(g.nu * g.nv);
  parallel_for(g.nv, [&](std::size_t j) {
    for (std::size_t i = 0; i < g.nu; ++i) {
      const UnitSquarePoint p{g.u(i), g.v(j)};
      gv.values[j * g.nu + i] = density ? copula_density(p, cache) : copula_cdf(p, cache);
    }
  });
  return gv;
}

void write_grid_csv(std::ostream& out, const GridValues& gv) {
  CsvWriter w(out);
  w.row({"u", "v", "value"});
  for (std::size_t j = 0; j < gv.grid.nv; ++j)
    for (std::size_t i = 0; i < gv.grid.nu; ++i) {
      w.field(gv.grid.u(i)).field(gv.grid.v(j)).field(gv.at(i, j));
      w.end_row();
    }
}

}  // namespace bmcopula::cli
