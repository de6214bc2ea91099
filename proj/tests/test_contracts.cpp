#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "swing/contracts.hpp"

using namespace swing;

namespace {

ContractSpec top_base() {
  ContractSpec s;
  s.kind = ContractKind::TakeOrPay;
  s.strike = 20.0;
  s.volume = {0, 1, 20, 25, 30, true};
  return s;
}

ContractSpec penalty_base() {
  ContractSpec s;
  s.kind = ContractKind::Penalty;
  s.strike = 20.0;
  s.A = 1.0;
  s.B = 1.0;
  s.Q_A = 20;
  s.Q_B = 25;
  s.volume = {0, 1, 0, 0, 30, false};
  return s;
}

}  // namespace

TEST_CASE("immediate reward is q times the spread") {
  ContractSpec s = top_base();
  CHECK(s.immediate_reward(20.0, 0) == 0.0);
  CHECK(s.immediate_reward(20.0, 6) == 0.0);  // at the money
  s.strike = 19.0;
  CHECK(s.immediate_reward(21.0, 3) == 6.0);
  CHECK(s.immediate_reward(17.0, 2) == -4.0);  // sign free
}

TEST_CASE("take-or-pay has zero terminal value") {
  ContractSpec s = top_base();
  CHECK(s.terminal_value(15.0, 20) == 0.0);
  CHECK(s.terminal_value(80.0, 25) == 0.0);
}

TEST_CASE("penalty terminal value prices both violations") {
  ContractSpec s = penalty_base();
  CHECK(s.terminal_value(20.0, 18) == -40.0);  // 2 below Q_A at S=20
  CHECK(s.terminal_value(20.0, 22) == 0.0);    // inside the free band
  CHECK(s.terminal_value(20.0, 20) == 0.0);
  CHECK(s.terminal_value(20.0, 25) == 0.0);
  CHECK(s.terminal_value(10.0, 28) == -30.0);  // 3 above Q_B at S=10
  // linear in S and in each violation coefficient
  s.A = 2.5;
  CHECK(s.terminal_value(20.0, 18) == -100.0);
  s.B = 0.5;
  CHECK(s.terminal_value(40.0, 27) == -40.0);
}

TEST_CASE("penalty is never positive and vanishes exactly on the band") {
  ContractSpec s = penalty_base();
  for (int Q = 0; Q <= 30; ++Q) {
    double v = s.terminal_value(20.0, Q);
    CHECK(v <= 0.0);
    CHECK((v == 0.0) == (Q >= 20 && Q <= 25));
  }
}

TEST_CASE("contract validation lists violations") {
  CHECK(top_base().validate().empty());
  CHECK(penalty_base().validate().empty());

  ContractSpec s = penalty_base();
  s.A = -1.0;
  CHECK(!s.validate().empty());
  s = penalty_base();
  s.Q_A = 26;
  s.Q_B = 25;  // band inverted
  CHECK(!s.validate().empty());
  s = top_base();
  s.volume.Q_min = 40;  // infeasible volume constraints surface here too
  CHECK(!s.validate().empty());
  CHECK_THROWS_AS(s.ensure_valid(), std::invalid_argument);
  // firm flag must match the contract kind
  s = top_base();
  s.volume.firm = false;
  CHECK(!s.validate().empty());
  s = penalty_base();
  s.volume.firm = true;
  CHECK(!s.validate().empty());
}
