#pragma once

#include <cstddef>
#include <span>

namespace ddh {

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

// a.b / (|a||b|), clamped to [-1, 1]. Throws ShapeError on length mismatch and
// DomainError if either input has zero norm.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

}  // namespace ddh
