"""khdetect: exact link-homology calculators and a certificate-producing detector.

Subpackages by role:

* ``linkdiag``   planar diagram (PD) and braid-closure plumbing
* ``exactalg``   exact linear algebra over GF(2) and Q
* ``khovanov``   bigraded Khovanov homology ranks from the cube of resolutions
* ``laurent``    Laurent polynomial ring utilities, Torres conditions, support criteria
* ``gridfloer``  grid diagrams, tilde/hat link Floer homology, Euler characteristics
* ``detect``     the staged detector for L7n1 and the trefoil-meridian link
* ``cli``        command line front end and the bundled reference corpus
"""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("khdetect")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

__all__ = ["__version__"]
