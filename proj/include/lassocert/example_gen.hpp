#pragma once

#include "lassocert/geometry.hpp"
#include "lassocert/problem.hpp"

namespace lassocert {

enum class ExampleVariant { Lasso, Sr };

struct GeneratedExample {
  ProblemInstance problem;
  geometry::SolutionFace closed_form;
};

// The 2x3 sparse-recovery instance family with A = (1 3 0; 1 -1 1), b = (0, 1+gamma),
// together with the closed-form solution set for the requested loss and lambda.
GeneratedExample generate_example(double gamma, ExampleVariant variant, double lambda);

}  // namespace lassocert
