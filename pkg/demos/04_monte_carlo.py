# Does the asymptotic sd describe finite samples?
#
# Repeatedly draw n = 1000 observations, estimate q by maximum likelihood and
# compare the spread of the estimates to 1/sqrt(n I(q)).

from priorshift import BinormalModel, MixtureModel
from priorshift.experiments import monte_carlo_ml, monte_carlo_smm

mix = MixtureModel(BinormalModel(0.0, 2.0, 1.0), 0.2)
ml = monte_carlo_ml(mix, n=1000, replications=1000, seed=7, workers=4)
print("ML : mean", round(ml.mean_q_hat, 5), " sd", round(ml.sd_q_hat, 5),
      " predicted", round(ml.predicted_sd, 5), " boundary hits", ml.boundary_hits)

smm = monte_carlo_smm(mix.densities, q=0.2, n=100, replications=100_000, seed=11)
print("SMM: mean", round(smm.mean_q_hat, 5), " var", round(smm.var_q_hat, 6),
      " exact", round(smm.exact_var, 6))

# Weak separation: the estimate often lands on a boundary
weak = MixtureModel(BinormalModel(0.0, 0.25, 1.0), 0.2)
w = monte_carlo_ml(weak, n=100, replications=500, seed=3)
print("\nweak signal: boundary share", w.boundary_hits / w.replications,
      " predicted sd", round(w.predicted_sd, 3), " observed sd", round(w.sd_q_hat, 3))
