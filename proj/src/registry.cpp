#include "devink/ink.hpp"

#include <algorithm>
#include <array>

#include "devink/error.hpp"

namespace devink {
namespace {

// Transliterated names. Entries 1-50 build the base character set; 51-69 are
// the supplementary strokes (matra forms, marks, frequent writer variants).
constexpr std::array<std::string_view, kPrimitiveCount> kNames = {
    "a",    "A",     "i",     "I",     "u",     "U",       "R",      "e",
    "ai",   "o",     "ou",    "k",     "kh",    "g",       "gh",     "G",
    "c",    "ch",    "j",     "jh",    "J",     "T",       "Th",     "D",
    "Dh",   "N",     "t",     "th",    "d",     "dh",      "n",      "p",
    "ph",   "b",     "bh",    "m",     "y",     "r",       "l",      "v",
    "z",    "S",     "s",     "h",     "kS",    "tr",      "jJ",     "Ab",
    "L",    "RR",    "bar",   "danda", "hook",  "loop",    "tail",   "curl",
    "arc_l", "arc_r", "mi",   "mI",    "mu",    "mU",      "me",     "mai",
    "mR",   "anusvara", "candra", "visarga", "halant",
};

std::string valid_names_list() {
  std::string out;
  for (auto name : kNames) {
    if (!out.empty()) out += ", ";
    out += name;
  }
  return out;
}

}  // namespace

PrimitiveId::PrimitiveId(int index) : index_(index) {
  if (index < 1 || index > kPrimitiveCount) {
    throw DataError("primitive index " + std::to_string(index) +
                    " outside 1.." + std::to_string(kPrimitiveCount));
  }
}

PrimitiveId PrimitiveId::from_name(std::string_view name) {
  auto it = std::find(kNames.begin(), kNames.end(), name);
  if (it == kNames.end()) {
    throw DataError("unknown primitive '" + std::string(name) +
                    "'; valid names: " + valid_names_list());
  }
  return PrimitiveId(static_cast<int>(it - kNames.begin()) + 1);
}

std::string_view PrimitiveId::name() const noexcept { return kNames[index_ - 1]; }

std::span<const std::string_view> primitive_names() noexcept { return kNames; }

}  // namespace devink
