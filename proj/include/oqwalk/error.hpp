/**
 * This code is part of oqwalk.
 *
 * (C) Copyright oqwalk contributors 2026.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 *
 * Any modifications or derivative works of this code must retain this
 * copyright notice, and modified files need to carry a notice indicating
 * that they have been altered from the originals.
 */

#ifndef _oqwalk_error_hpp_
#define _oqwalk_error_hpp_

#include <stdexcept>
#include <string>

namespace oqwalk {

// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

// Malformed input: bad walk specification, out-of-range parameter,
// shape mismatch, unknown configuration key.
struct ConfigError : Error {
  explicit ConfigError(const std::string &msg) : Error(msg) {}
};

// A computation route whose hypotheses fail for the given walk
// (e.g. singular recurrence blocks, so no matrix measure is available).
// The message names the failed hypothesis.
struct InapplicableRoute : Error {
  explicit InapplicableRoute(const std::string &msg) : Error(msg) {}
};

// Numerical certification failed: quadrature did not converge, interior
// not absorbing, probabilities inconsistent beyond tolerance, dead state.
struct NumericalFailure : Error {
  explicit NumericalFailure(const std::string &msg) : Error(msg) {}
};

} // namespace oqwalk

#endif
