import os
import subprocess
import sys
import textwrap

import numpy as np

from issa import kernels
from issa.sampling import make_stream


def _dense_reference(R, zb, w, lam_s, inv_s):
    d = R.shape[0]
    out = R.copy()
    for j in range(zb.shape[0]):
        X = (w[j] * np.outer(zb[j], zb[j]) + lam_s * np.eye(d) * (1 / inv_s)) * inv_s
        out = np.eye(d) + (np.eye(d) - X) @ out
    return out


def test_backend_name():
    assert kernels.backend() in ("numba", "numpy")


def test_fold_rank1_matches_dense_reference():
    rng = make_stream(5)
    d, m = 7, 12
    zb = rng.standard_normal((m, d))
    w = rng.uniform(0.1, 1.0, size=m)
    R0 = np.eye(d) + 0.01 * rng.standard_normal((d, d))
    s = float((zb**2).sum(axis=1).max() + 0.1)
    got = kernels.fold_rank1(R0, zb, w, 0.1 / s, 1.0 / s)
    want = _dense_reference(R0, zb, w, 0.1 / s, 1.0 / s)
    np.testing.assert_allclose(got, want, rtol=1e-11, atol=1e-13)


def test_mc_fold_matches_sequential():
    rng = make_stream(6)
    T, m, d = 9, 10, 5
    Zt = rng.standard_normal((T, m, d))
    Wt = rng.uniform(0.2, 1.0, size=(T, m))
    s = float((Zt**2).sum(axis=2).max() + 0.2)
    got = kernels.mc_fold_rank1(Zt, Wt, 0.2 / s, 1.0 / s)
    for t in range(T):
        want = kernels.fold_rank1(np.eye(d), Zt[t], Wt[t], 0.2 / s, 1.0 / s)
        np.testing.assert_allclose(got[t], want, rtol=1e-10, atol=1e-12)


def test_pure_numpy_backend_agrees(tmp_path):
    # Run the same fold in a subprocess with the numba path disabled and
    # compare; the two backends may differ only at rounding level.
    script = textwrap.dedent(
        """
        import numpy as np
        from issa import kernels
        from issa.sampling import make_stream
        assert kernels.backend() == "numpy"
        rng = make_stream(6)
        T, m, d = 9, 10, 5
        Zt = rng.standard_normal((T, m, d))
        Wt = rng.uniform(0.2, 1.0, size=(T, m))
        s = float((Zt ** 2).sum(axis=2).max() + 0.2)
        out = kernels.mc_fold_rank1(Zt, Wt, 0.2 / s, 1.0 / s)
        import sys
        np.save(sys.argv[1], out)
        """
    )
    out_file = tmp_path / "mc_numpy.npy"
    env = dict(os.environ, ISSA_PURE_NUMPY="1")
    subprocess.run(
        [sys.executable, "-c", script, str(out_file)], check=True, env=env
    )
    rng = make_stream(6)
    T, m, d = 9, 10, 5
    Zt = rng.standard_normal((T, m, d))
    Wt = rng.uniform(0.2, 1.0, size=(T, m))
    s = float((Zt**2).sum(axis=2).max() + 0.2)
    here = kernels.mc_fold_rank1(Zt, Wt, 0.2 / s, 1.0 / s)
    other = np.load(out_file)
    np.testing.assert_allclose(here, other, rtol=1e-12, atol=1e-14)
