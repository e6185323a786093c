#pragma once

#include "vatlas/varifold.hpp"

#include <string>

namespace vatlas {

// Arrangement render: bounded faces filled by sign (MINUS gray, PLUS white),
// A curves blue, B curves red, crossings as dots. With a varifold, each face
// is labeled with its multiplicity.
std::string render_svg(const Arrangement& arr, const Varifold* v = nullptr);

}  // namespace vatlas
