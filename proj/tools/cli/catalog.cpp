#include "commands.hpp"

namespace tsbvp::cli {

const std::vector<CatalogEntry>& example_catalog() {
  static const std::vector<CatalogEntry> catalog{
      {"integer_grid.ini",
       "regular problem on {0,1,2,3,4} with h = 1; exact solution (6,6,5,3,0)",
       R"(# u^DD(rho(t)) + 1 = 0 on the integers 0..4, u^D(0) = 0, u(4) = 0.
[problem]
kind = regular
h = 1
gT = 0

[timescale]
point = 0
point = 1
point = 2
point = 3
point = 4

[output]
csv_path = integer_grid.csv
json_path = integer_grid.json
)"},
      {"quadratic.ini",
       "regular problem on [0,1] with h = 2; converges to 1 - t^2",
       R"(# u'' + 2 = 0, u'(0) = 0, u(1) = 0 on a uniform grid of 1000 steps.
[problem]
kind = regular
h = 2
gT = 0
alpha = 0
beta = 2

[timescale]
interval = 0 1
resolution = 1000

[output]
csv_path = quadratic.csv
json_path = quadratic.json
)"},
      {"mixed_scale.ini",
       "regular problem on [0,0.5] joined with the isolated points 0.75 and 1",
       R"(# Nonlinear regular problem on a time scale that is partly continuous and
# partly discrete. alpha and beta are constant lower and upper solutions.
[problem]
kind = regular
h = 1 - u + 0.25*sin(t)
gT = 0.5
alpha = 0.5
beta = 1.25

[timescale]
interval = 0 0.5
point = 0.75
point = 1
resolution = 200

[output]
csv_path = mixed_scale.csv
json_path = mixed_scale.json
)"},
      {"singular_sqrt.ini",
       "singular problem f = u^(-1/2) (1 - u) with c = 1, delta = 0.5",
       R"(# f(t, u) = u^(-1/2) (1 - u) blows up at u = 0 and vanishes at c = 1.
[problem]
kind = singular
f = u^(-1/2)*(1 - u)
gT = 0.1
c = 1
delta = 0.5

[timescale]
interval = 0 1
resolution = 200

[solver]
k0 = 2
tol_limit = 1e-6
max_stages = 16

[output]
csv_path = singular_sqrt.csv
json_path = singular_sqrt.json
)"},
      {"singular_power_mix.ini",
       "(a(t) + u^alpha + u^(-beta)) (c - u) with a(t) = 1 + t, alpha = 1, "
       "beta = 1/2, c = 1 (derivative term omitted)",
       R"(# Nonlinearity (a(t) + u^alpha + u^(-beta)) (c - u) with a(t) = 1 + t,
# alpha = 1, beta = 1/2 and c = 1. The derivative-dependent term of the
# original family is not supported and is omitted here.
[problem]
kind = singular
f = (1 + t + u + u^(-0.5))*(1 - u)
gT = 0.2
c = 1
delta = 0.25

[timescale]
interval = 0 0.5
point = 0.625
point = 0.75
point = 0.875
point = 1
resolution = 100

[output]
csv_path = singular_power_mix.csv
json_path = singular_power_mix.json
)"},
  };
  return catalog;
}

}  // namespace tsbvp::cli
