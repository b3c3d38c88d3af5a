#include "qpd/games.hpp"

#include <cmath>
#include <stdexcept>

namespace qpd {

PayoffMatrix PayoffMatrix::from_cells(const PayoffPair& cc, const PayoffPair& cd,
                                      const PayoffPair& dc, const PayoffPair& dd) {
  for (const PayoffPair* p : {&cc, &cd, &dc, &dd}) {
    if (!std::isfinite(p->u1) || !std::isfinite(p->u2)) {
      throw std::domain_error("payoff entries must be finite");
    }
  }
  PayoffMatrix m;
  m.cells_ = {{{cc, cd}, {dc, dd}}};
  return m;
}

bool PayoffMatrix::is_pd() const {
  const PayoffPair& cc = cell(Coin::C, Coin::C);
  const PayoffPair& cd = cell(Coin::C, Coin::D);
  const PayoffPair& dc = cell(Coin::D, Coin::C);
  const PayoffPair& dd = cell(Coin::D, Coin::D);
  const bool symmetric_shape = cc.u1 == cc.u2 && dd.u1 == dd.u2 &&
                               cd.u1 == dc.u2 && cd.u2 == dc.u1;
  if (!symmetric_shape) return false;
  const double r = cc.u1, s = cd.u1, t = cd.u2, p = dd.u1;
  return t > r && r > p && p > s && r > (t + s) / 2.0;
}

PayoffMatrix pd_matrix(double t, double r, double p, double s) {
  return PayoffMatrix::from_cells({r, r}, {s, t}, {t, s}, {p, p});
}

PayoffMatrix canonical_pd_matrix() { return pd_matrix(5.0, 3.0, 1.0, 0.0); }

void validate(const TaxiParams& p) {
  for (double v : {p.r2, p.r1, p.r0, p.c}) {
    if (!std::isfinite(v)) throw std::domain_error("taxi parameters must be finite");
  }
  if (!(p.r2 > p.r1 && p.r1 > p.r0)) {
    throw std::domain_error("taxi rewards must satisfy R2 > R1 > R0");
  }
  if (!(p.c > 0.0)) throw std::domain_error("maintenance cost c must be positive");
}

PayoffMatrix taxi_matrix(const TaxiParams& p) {
  validate(p);
  const double half = p.c / 2.0;
  return PayoffMatrix::from_cells({p.r2 - half, p.r2 - half}, {p.r1 - p.c, p.r1},
                                  {p.r1, p.r1 - p.c}, {p.r0, p.r0});
}

PayoffPair expected_payoffs(const PayoffMatrix& m, const OutcomeDistribution& delta) {
  PayoffPair e;
  for (int i = 0; i < 4; ++i) {
    const PayoffPair& c = m.cell(Outcome::from_index(i));
    e.u1 += delta[i] * c.u1;
    e.u2 += delta[i] * c.u2;
  }
  return e;
}

void to_json(nlohmann::ordered_json& j, const PayoffMatrix& m) {
  j = nlohmann::ordered_json{
      {"cells",
       {{"CC", {m.cell(0, 0).u1, m.cell(0, 0).u2}},
        {"CD", {m.cell(0, 1).u1, m.cell(0, 1).u2}},
        {"DC", {m.cell(1, 0).u1, m.cell(1, 0).u2}},
        {"DD", {m.cell(1, 1).u1, m.cell(1, 1).u2}}}},
      {"meta", {{"is_pd", m.is_pd()}}}};
}

}  // namespace qpd
