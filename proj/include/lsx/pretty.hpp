#pragma once

#include <string>

#include "lsx/term.hpp"
#include "lsx/type.hpp"

namespace lsx {

std::string show_scalar(const Scalar &s);
std::string show_type(const TypePtr &t);
std::string show_term(const TermPtr &t);

}  // namespace lsx
