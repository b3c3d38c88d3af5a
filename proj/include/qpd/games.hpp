#pragma once

#include <array>

#include "json.hpp"
#include "qpd/engine.hpp"

// 2x2 bimatrix games: payoff cells, the prisoner's-dilemma predicates,
// the taxi-game constructor and expectations under an outcome distribution.

namespace qpd {

struct PayoffPair {
  double u1 = 0.0;
  double u2 = 0.0;

  friend bool operator==(const PayoffPair&, const PayoffPair&) = default;
};

/// A 2x2 bimatrix game.  Rows are agent 1's strategy, columns agent 2's,
/// indexed by Coin (C = row/col 0, D = row/col 1).
class PayoffMatrix {
 public:
  PayoffMatrix() = default;
  static PayoffMatrix from_cells(const PayoffPair& cc, const PayoffPair& cd,
                                 const PayoffPair& dc, const PayoffPair& dd);

  const PayoffPair& cell(Coin row, Coin col) const {
    return cells_[row == Coin::D ? 1 : 0][col == Coin::D ? 1 : 0];
  }
  const PayoffPair& cell(int row, int col) const {
    return cells_[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
  }

  /// Payoff pair of the outcome with the given basis index [CC,CD,DC,DD].
  const PayoffPair& cell(const Outcome& o) const { return cell(o.coin1, o.coin2); }

  /// True iff the matrix has the symmetric (R,R)/(S,T)/(T,S)/(P,P) shape and
  /// satisfies T > R > P > S and R > (T+S)/2 (strict; boundary cases are
  /// classified not-PD).
  bool is_pd() const;

 private:
  std::array<std::array<PayoffPair, 2>, 2> cells_{};
};

PayoffMatrix pd_matrix(double t, double r, double p, double s);

/// Conventional instance (T,R,P,S) = (5,3,1,0).
PayoffMatrix canonical_pd_matrix();

/// Taxi game: two drivers, a manager who rewards the observed car status.
/// Requires r2 > r1 > r0 and c > 0.
struct TaxiParams {
  double r2 = 0.0;
  double r1 = 0.0;
  double r0 = 0.0;
  double c = 0.0;
};

void validate(const TaxiParams& p);

/// Cells (R2-c/2, R2-c/2), (R1-c, R1), (R1, R1-c), (R0, R0); equivalently
/// (T,R,P,S) = (R1, R2-c/2, R0, R1-c).
PayoffMatrix taxi_matrix(const TaxiParams& p);

/// (sum_i delta_i * u1_i, sum_i delta_i * u2_i) over [CC,CD,DC,DD].
PayoffPair expected_payoffs(const PayoffMatrix& m, const OutcomeDistribution& delta);

// {cells:{CC:[u1,u2],...}, meta:{is_pd:bool}}
void to_json(nlohmann::ordered_json& j, const PayoffMatrix& m);

}  // namespace qpd
