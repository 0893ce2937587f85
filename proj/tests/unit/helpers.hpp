#pragma once

#include <string>

#include "fullgroup/fullgroup.hpp"
#include "fullgroup/oracle.hpp"
#include "fullgroup/random.hpp"

namespace fg_test {

using namespace fullgroup;

inline ClopenSet set(const std::string& text) { return parse_clopen(text); }
inline Element<Odometer> odo(const std::string& text) { return parse_element<Odometer>(text); }
inline Element<FullShift> shift(const std::string& text) { return parse_element<FullShift>(text); }
inline Word word(const std::string& text, int base = 2) { return Word::parse(text, base); }

inline Rng rng_for(const std::string& label) { return Rng(99).substream(label); }

}  // namespace fg_test
