// Copyright 2026 The freqlink Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace freqlink {

/// n-qubit Pauli operator with phase i^k, k in {0,1,2,3}. Letters are stored
/// as (x, z) bit pairs with the convention letter(x,z) = i^{xz} X^x Z^z, so
/// (1,1) is Y exactly.
class PauliString {
 public:
  explicit PauliString(std::size_t n) : x_(n, 0), z_(n, 0), phase_exp_(0) {}

  static PauliString identity(std::size_t n) { return PauliString(n); }

  static PauliString single(std::size_t n, std::size_t qubit, char letter) {
    PauliString p(n);
    p.set_letter(qubit, letter);
    return p;
  }

  /// Parses e.g. "+XZII", "-YI", "XX" (implicit +), "iX", "-iZ".
  static PauliString from_string(std::string_view text) {
    std::uint8_t phase = 0;
    std::size_t pos = 0;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      if (text[pos] == '-') phase = 2;
      ++pos;
    }
    if (pos < text.size() && text[pos] == 'i') {
      phase = static_cast<std::uint8_t>((phase + 1) & 3);
      ++pos;
    }
    PauliString p(text.size() - pos);
    p.phase_exp_ = phase;
    for (std::size_t q = 0; pos < text.size(); ++pos, ++q) {
      p.set_letter(q, text[pos]);
    }
    return p;
  }

  std::size_t num_qubits() const { return x_.size(); }
  bool x(std::size_t q) const { return x_[q] != 0; }
  bool z(std::size_t q) const { return z_[q] != 0; }
  void set_x(std::size_t q, bool v) { x_[q] = v ? 1 : 0; }
  void set_z(std::size_t q, bool v) { z_[q] = v ? 1 : 0; }

  void set_letter(std::size_t q, char letter) {
    switch (letter) {
      case 'I': x_[q] = 0; z_[q] = 0; break;
      case 'X': x_[q] = 1; z_[q] = 0; break;
      case 'Y': x_[q] = 1; z_[q] = 1; break;
      case 'Z': x_[q] = 0; z_[q] = 1; break;
      default: throw std::invalid_argument(std::string("unknown Pauli letter: ") + letter);
    }
  }

  char letter(std::size_t q) const {
    static constexpr char kLetters[4] = {'I', 'Z', 'X', 'Y'};
    return kLetters[(x_[q] << 1) | z_[q]];
  }

  std::uint8_t phase_exp() const { return phase_exp_; }
  void set_phase_exp(std::uint8_t e) { phase_exp_ = e & 3; }

  bool is_hermitian() const { return (phase_exp_ & 1) == 0; }

  /// +1 or -1 for Hermitian strings.
  int sign() const {
    if (!is_hermitian()) throw std::domain_error("Pauli string has imaginary phase");
    return phase_exp_ == 0 ? 1 : -1;
  }

  void negate() { phase_exp_ = static_cast<std::uint8_t>((phase_exp_ + 2) & 3); }

  bool commutes_with(const PauliString& other) const {
    require_same_size(other);
    int anti = 0;
    for (std::size_t q = 0; q < x_.size(); ++q) {
      anti ^= (x_[q] & other.z_[q]) ^ (z_[q] & other.x_[q]);
    }
    return anti == 0;
  }

  /// Operator product: *this = (*this) * rhs, phases included.
  PauliString& operator*=(const PauliString& rhs) {
    require_same_size(rhs);
    int phase = phase_exp_ + rhs.phase_exp_;
    for (std::size_t q = 0; q < x_.size(); ++q) {
      const int x1 = x_[q], z1 = z_[q], x2 = rhs.x_[q], z2 = rhs.z_[q];
      // letter(x1,z1) letter(x2,z2) = i^phi letter(x1^x2, z1^z2) with
      // phi = x1 z1 + x2 z2 - (x1^x2)(z1^z2) + 2 z1 x2   (mod 4)
      phase += x1 * z1 + x2 * z2 - (x1 ^ x2) * (z1 ^ z2) + 2 * z1 * x2;
      x_[q] = static_cast<std::uint8_t>(x1 ^ x2);
      z_[q] = static_cast<std::uint8_t>(z1 ^ z2);
    }
    phase_exp_ = static_cast<std::uint8_t>(((phase % 4) + 4) % 4);
    return *this;
  }

  friend PauliString operator*(PauliString lhs, const PauliString& rhs) {
    lhs *= rhs;
    return lhs;
  }

  bool same_letters(const PauliString& other) const {
    require_same_size(other);
    return x_ == other.x_ && z_ == other.z_;
  }

  bool is_identity_letters() const {
    for (std::size_t q = 0; q < x_.size(); ++q) {
      if (x_[q] | z_[q]) return false;
    }
    return true;
  }

  friend bool operator==(const PauliString& a, const PauliString& b) {
    return a.phase_exp_ == b.phase_exp_ && a.x_ == b.x_ && a.z_ == b.z_;
  }

  std::string str() const {
    static constexpr const char* kPrefix[4] = {"+", "+i", "-", "-i"};
    std::string out = kPrefix[phase_exp_];
    for (std::size_t q = 0; q < x_.size(); ++q) out += letter(q);
    return out;
  }

 private:
  void require_same_size(const PauliString& other) const {
    if (other.x_.size() != x_.size()) {
      throw std::invalid_argument("Pauli strings act on different qubit counts");
    }
  }

  std::vector<std::uint8_t> x_;
  std::vector<std::uint8_t> z_;
  std::uint8_t phase_exp_;
};

}  // namespace freqlink
