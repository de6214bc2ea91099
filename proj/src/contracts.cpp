#include "swing/contracts.hpp"

#include <sstream>
#include <stdexcept>

namespace swing {

std::vector<std::string> ContractSpec::validate() const {
  std::vector<std::string> bad = volume.validate();
  const bool top = (kind == ContractKind::TakeOrPay);
  if (top != volume.firm)
    bad.push_back("take-or-pay requires firm volume bounds and the penalty "
                  "variant requires soft ones");
  if (kind == ContractKind::Penalty) {
    if (A < 0.0) bad.push_back("penalty slope A must be >= 0");
    if (B < 0.0) bad.push_back("penalty slope B must be >= 0");
    if (Q_A > Q_B) bad.push_back("Q_A must be <= Q_B");
  }
  return bad;
}

void ContractSpec::ensure_valid() const {
  const auto bad = validate();
  if (bad.empty()) return;
  std::ostringstream os;
  os << "invalid contract:";
  for (const auto& m : bad) os << "\n  - " << m;
  throw std::invalid_argument(os.str());
}

}  // namespace swing
