#pragma once

#include "gptlab/report.hpp"
#include "oracles.hpp"

namespace testing_util {

template <class F>
oracle::V to_d(const gptlab::Vec<F>& v) {
  oracle::V out;
  for (const auto& x : v) out.push_back(gptlab::Field<F>::to_double(x));
  return out;
}

template <class F>
oracle::M to_d(const std::vector<gptlab::Vec<F>>& vs) {
  oracle::M out;
  for (const auto& v : vs) out.push_back(to_d(v));
  return out;
}

inline gptlab::Vec<gptlab::Rational> qv(std::initializer_list<const char*> xs) {
  gptlab::Vec<gptlab::Rational> out;
  for (const char* x : xs) {
    gptlab::Rational q(x);
    q.canonicalize();
    out.push_back(q);
  }
  return out;
}

}  // namespace testing_util
