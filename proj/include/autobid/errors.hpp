// Copyright 2026 The autobid Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef AUTOBID_ERRORS_HPP
#define AUTOBID_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace autobid {

/// A learner or pacer was driven out of order (observe without a bid, two
/// bids in a row, or a step past the horizon).
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Hyperparameters that cannot produce a valid run (e.g. no exploitation
/// rounds left for the bandit learner).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace autobid

#endif  // AUTOBID_ERRORS_HPP
