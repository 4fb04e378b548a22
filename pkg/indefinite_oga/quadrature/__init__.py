from indefinite_oga.quadrature.gauss import (
    BoxDomain, QuadratureGrid, gauss_legendre_1d, build_grid, integrate
)

__all__ = ['BoxDomain', 'QuadratureGrid', 'gauss_legendre_1d', 'build_grid', 'integrate']
