"""bqg: finite-scale representation theory of twisted bicrossed products.

Groups and representations (groups, reps), projective machinery
(projective), semidirect classification and fusion (mackey), matched pairs
and the bicrossed product with its concrete crossed-product algebra
(bicrossed), length functions / growth / rapid-decay shell checks
(lengths), plus a config-driven CLI (cli).
"""

__version__ = "0.1.0"
