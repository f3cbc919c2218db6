"""
Reasoning engine for definite logic programs.

Terms and theories, subsumption, least models, connected theories, the
derivability relations built on them and brute-force reference oracles.
"""
