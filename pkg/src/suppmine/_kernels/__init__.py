"""Hot-loop kernels with a compiled core and a pure-Python fallback.

Three loops dominate pipeline runtime: the dictionary-automaton scan over
abstract text, n-gram feature hashing, and the SGD epochs of the baseline
classifier. Both backends implement the exact same arithmetic, so results are
bit-identical; ``tests/test_kernels.py`` enforces parity.

Set ``SUPPMINE_PURE=1`` to force the pure backend even when the compiled
extension is importable.
"""

import os

if os.environ.get("SUPPMINE_PURE") == "1":
    from . import pure as _impl

    BACKEND = "pure"
else:
    try:
        from . import _native as _impl

        BACKEND = "native"
    except ImportError:
        from . import pure as _impl

        BACKEND = "pure"

ac_scan = _impl.ac_scan
fnv1a_indices = _impl.fnv1a_indices
sgd_epoch = _impl.sgd_epoch
predict_proba = _impl.predict_proba
