"""Spectral-measure laboratory for Wiener-Hopf, Toeplitz and Hankel forms."""
__version__ = "0.1.0"

from .errors import (ApproximateResultWarning, CorrespondenceRangeError, DomainError,
                     GridError, InvalidMeasureError, NonFiniteResultError,
                     RepresentationDomainError, SingularKernelError, WhlabError)
from .measure import (FiniteMeasure, Lebesgue, Lorentzian, Power, SpectralMeasure,
                      SumDensity, Table, Weighted, Window, ZERO, cayley_coeff,
                      certify_growth, ess_inf_density, load_measure, weight_measure,
                      wiener_atom_statistic)
from .laguerre import (LaguerreBasis, cayley_power_identity_residual, gram_matrix,
                       laguerre_basis_fn, laguerre_expand, laguerre_laplace_l1,
                       laguerre_laplace_l1_quad, laguerre_poly, parseval_defect)
from .testfunctions import Bump, LaguerreCombination, SampledFunction
from .kernel import (KernelProfile, KernelSamples, eta_profile, fit_exponential_polynomial,
                     kernel_profile, lag1_identity_residual, ode_residual, rb_pipeline,
                     regularized_kernel, sigma_tail_norm, synthesize_kernel)
from .forms import (ToeplitzSection, correspondence_residual, defect_probe,
                    section_spectrum, shift_invariance_residual, spectral_form,
                    time_domain_form, toeplitz_coeff, toeplitz_section)
from .hankel import (HankelProfile, bernstein_profile, complete_monotonicity_residual,
                     hankel_closability_flag, hankel_form_spectral, hankel_form_time)
