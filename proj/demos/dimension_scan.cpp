// Counting-function slopes for the two headline Dirac families: the generic
// quantum family is 3-dimensional, the classical staircase 4-dimensional.
#include <cstdio>

#include "suq2/dirac.hpp"

int main() {
    for (const int N : {40, 60, 80}) {
        const auto fit = suq2::spectral_dimension(suq2::DiracFamily::generic(), N, 25);
        std::printf("generic   n2_max=%4d: slope %.3f (R^2 %.4f)\n", N, fit.slope,
                    fit.fit_quality);
    }
    for (const int N : {400, 1000}) {
        const auto fit = suq2::spectral_dimension(suq2::DiracFamily::staircase(), N, 25);
        std::printf("staircase n2_max=%4d: slope %.3f (R^2 %.4f)\n", N, fit.slope,
                    fit.fit_quality);
    }
    return 0;
}
