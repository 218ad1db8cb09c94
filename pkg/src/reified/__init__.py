"""Exact computations with reified valuations on the closed unit disc.

Submodules:

* ``stone``    -- finite distributive lattices, prime filters, Spec and spectralification
* ``values``   -- rank-3 reified values, retraction, order-relation axioms
* ``poly``     -- univariate rational polynomials and Newton polygons
* ``disc``     -- points of the disc, evaluation, rational subspaces
* ``cover``    -- standard rational and Laurent coverings
* ``tate``     -- weighted Tate series, Laurent splitting, Čech checks, glueing
* ``division`` -- weighted leading terms and multivariate division
* ``witt``     -- Witt vectors over a perfect F_p-algebra and tilting
* ``cli``      -- the ``reified`` command
"""

__version__ = "0.1.0"
