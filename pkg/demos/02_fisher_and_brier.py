# Fisher information of the prevalence and the Brier score of the posterior
#
# The information about q carried by one observation equals the variance of
# the posterior probability, rescaled by (q(1-q))^2. So a better-resolved
# classifier posterior means a tighter prevalence estimate.

import numpy as np

from priorshift import (
    BinormalModel, MixtureModel, brier_score, efficiency_report,
    fisher_information, posterior, resolution, sample_labelled,
)

q = 0.2
print(" mu1   info       var[eta]/(q(1-q))^2   Brier    resolution")
for mu1 in (0.25, 1.0, 2.0, 4.0):
    m = MixtureModel(BinormalModel(0.0, mu1, 1.0), q)
    info = fisher_information(m)
    res = resolution(m)
    print(f"{mu1:4.2f}  {info:9.5f}  {res / (q * (1 - q)) ** 2:9.5f}"
          f"             {brier_score(m):.5f}  {res:.5f}")

# Check the Brier score against labelled draws
m = MixtureModel(BinormalModel(0.0, 2.0, 1.0), q)
x, y = sample_labelled(m, 200_000, seed=1)
print("\nBrier, quadrature :", round(brier_score(m), 5))
print("Brier, simulation :", round(float(np.mean((y - posterior(m, x)) ** 2)), 5))

rep = efficiency_report(m, n=100)
print("\nasymptotic sd of the ML estimate at n=100:", round(rep.sigma_ml, 4))
