/* Copyright 2026 The lemon-ner Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Central finite-difference oracle shared by the unit and acceptance suites.
// It only ever calls the forward pass on a non-recording tape, so it stays
// independent of every backward closure it is checking.
#ifndef LEMON_TESTS_GRAD_CHECK_H_
#define LEMON_TESTS_GRAD_CHECK_H_

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "lemon/tape.h"

namespace lemon::testing {

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::string worst;  // "param[index]: analytic vs numeric"
  std::size_t entries_checked = 0;
};

// Relative error with a floor on the denominator so entries whose true
// gradient is ~0 are judged on absolute error.
inline double relative_error(double analytic, double numeric,
                             double floor = 1e-5) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / denom;
}

using LossFn = std::function<num::Var(num::Tape&)>;

// Checks d(loss)/d(param) for every entry of every parameter, or for at most
// `max_entries_per_param` entries (spread evenly) when that is nonzero.
inline GradCheckReport check_gradients(
    const std::vector<num::Parameter*>& params, const LossFn& loss_fn,
    double h = 1e-5, std::size_t max_entries_per_param = 0) {
  for (num::Parameter* p : params) p->zero_grad();
  {
    num::Tape tape(true);
    tape.backward(loss_fn(tape));
  }
  auto evaluate = [&] {
    num::Tape tape(false);
    return loss_fn(tape).value()[0];
  };

  GradCheckReport report;
  for (num::Parameter* p : params) {
    const std::size_t n = p->value().size();
    std::size_t stride = 1;
    if (max_entries_per_param && n > max_entries_per_param) {
      stride = (n + max_entries_per_param - 1) / max_entries_per_param;
    }
    for (std::size_t i = 0; i < n; i += stride) {
      const double saved = p->value()[i];
      p->value()[i] = saved + h;
      const double up = evaluate();
      p->value()[i] = saved - h;
      const double down = evaluate();
      p->value()[i] = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double analytic = p->grad()[i];
      const double err = relative_error(analytic, numeric);
      ++report.entries_checked;
      if (err > report.max_rel_error) {
        report.max_rel_error = err;
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s[%zu]: analytic %.9e vs numeric %.9e",
                      p->name().c_str(), i, analytic, numeric);
        report.worst = buf;
      }
    }
  }
  return report;
}

}  // namespace lemon::testing

#endif  // LEMON_TESTS_GRAD_CHECK_H_
