"""Entangled polynomial codes for coded matrix multiplication over GF(q).

Subpackages and modules:

* ``field``, ``blocks`` -- exact prime-field arithmetic and block partitions
* ``bilinear`` -- rank-R bilinear constructions (naive, Strassen, compositions)
* ``codes`` -- encoders and decoders for every mode, behind ``codes.scheme``
* ``verifier``, ``suites`` -- threshold, secrecy and privacy certificates
* ``sim`` -- simulated master/worker runs with stragglers
* ``config``, ``matrix_io``, ``cli`` -- the ``epc`` command-line tool
"""

__version__ = "0.1.0"
