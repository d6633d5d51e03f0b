// SPDX-License-Identifier: Apache-2.0

#ifndef HEATKERN_VOLTERRA_HPP
#define HEATKERN_VOLTERRA_HPP

#include <vector>

#include "heatkern/types.hpp"

namespace heatkern {

struct VolterraSpec {
  int order = 24; // Gauss nodes per simplex axis
};

// Time-ordered simplex integrals of matrix exponentials:
//   k=1:  int_0^1 dtau  e^{-(1-tau)H} F1 e^{-tau H}
//   k=2:  int_0^1 dtau2 int_0^tau2 dtau1
//             e^{-(1-tau2)H} F2 e^{-(tau2-tau1)H} F1 e^{-tau1 H}
// factors[0] = F1 is the innermost (rightmost) factor. Only k in {1, 2} is
// supported. Hermitian H is evaluated in its eigenbasis; general H falls
// back to node-wise exponentials.
CMatrix volterra_term(const CMatrix &h, const std::vector<CMatrix> &factors,
                      const VolterraSpec &spec = {});

} // namespace heatkern

#endif
