#pragma once

#include "arel/syntax.hpp"

namespace arel {

std::string show(const Index& t);
std::string show(const Constraint& c);
std::string show(const Assertion& a);
std::string show(const UTy& t);
std::string show(const RTy& t);
std::string show(const Term& t);

}  // namespace arel
