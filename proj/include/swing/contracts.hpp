#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "swing/volume_grid.hpp"

namespace swing {

enum class ContractKind { TakeOrPay, Penalty };

// Swing contract payoffs. Interest rates are zero throughout, so rewards are
// undiscounted: buying q at date k pays q * (S_k - K). Take-or-pay contracts
// have no terminal term (the volume grid enforces the global bounds); penalty
// contracts charge -S * (A * (Q - Q_A)_- + B * (Q - Q_B)_+) at expiry.
struct ContractSpec {
  ContractKind kind = ContractKind::TakeOrPay;
  double strike = 0.0;
  double A = 0.0;  // shortfall slope, >= 0
  double B = 0.0;  // excess slope, >= 0
  int Q_A = 0;
  int Q_B = 0;
  VolumeConstraints volume;

  std::vector<std::string> validate() const;
  void ensure_valid() const;  // throws std::invalid_argument listing violations

  double immediate_reward(double S, int q) const { return q * (S - strike); }

  double terminal_value(double S, int Q) const {
    if (kind == ContractKind::TakeOrPay) return 0.0;
    const double shortfall = std::max(double(Q_A - Q), 0.0);
    const double excess = std::max(double(Q - Q_B), 0.0);
    return -S * (A * shortfall + B * excess);
  }
};

}  // namespace swing
