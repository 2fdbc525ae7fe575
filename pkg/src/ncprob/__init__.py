"""ncprob: computational noncommutative probability.

Boolean, monotone, and free cumulant calculus on non-crossing and
interval partitions; Cauchy/F-transform analytics with Boolean and
monotone convolution; finite-dimensional operator models (Boolean star
products, monotone tensor products, variance-profile matrix models);
Berry-Esseen-type bound verification for central limit theorems, and
the first-order (infinitesimal) extension via upper-triangular lifts.
"""

from . import (algebra, berry, cumulants, infinitesimal, models, partitions,
               transforms, words)

__version__ = "0.1.0"

__all__ = ["algebra", "berry", "cumulants", "infinitesimal", "models",
           "partitions", "transforms", "words", "__version__"]
