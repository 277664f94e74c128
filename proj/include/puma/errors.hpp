// Copyright 2026 The puma3pc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace puma {

// Plaintext outside the fixed-point codec's representable range.
class MagnitudeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Replicated components that should be equal across parties are not.
class ShareConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Transport failure. `party` is the peer the failure is attributed to, or -1.
class ChannelError : public std::runtime_error {
 public:
  ChannelError(const std::string& what, int party = -1)
      : std::runtime_error(what), party_(party) {}
  int party() const { return party_; }

 private:
  int party_;
};

// A receive timed out or a message had the wrong size: the parties are not
// executing the same protocol sequence.
class ProtocolOrderError : public ChannelError {
 public:
  using ChannelError::ChannelError;
};

// Malformed weight file, config file or golden-vector file.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::size_t offset = 0)
      : std::runtime_error(what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace puma
