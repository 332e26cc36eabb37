"""Pure numpy fallback for the compiled decoder; same signature and semantics."""
import numpy as np

CLIP = 1.0 - 1e-12
TINY = 1e-300


def _satisfied(edge_check, edge_var, n_checks, syndrome, bits):
    par = np.bincount(edge_check, weights=bits[edge_var], minlength=n_checks).astype(np.int64)
    return np.array_equal(par & 1, syndrome)


def bp_decode(check_ptr, edge_var, var_ptr, var_edges, syndrome, llr, max_iter):
    n_checks = check_ptr.size - 1
    n_vars = var_ptr.size - 1
    edge_check = np.repeat(np.arange(n_checks), np.diff(check_ptr))
    check_sign = 1.0 - 2.0 * syndrome.astype(np.float64)

    bits = (llr < 0).astype(np.uint8)
    if _satisfied(edge_check, edge_var, n_checks, syndrome, bits):
        return bits, True, 0
    v2c = llr[edge_var].astype(np.float64)

    for it in range(1, max_iter + 1):
        t = np.tanh(0.5 * v2c)
        mag = np.maximum(np.abs(t), TINY)
        logmag = np.log(mag)
        neg = t < 0
        check_log = np.bincount(edge_check, weights=logmag, minlength=n_checks)
        check_neg = np.bincount(edge_check, weights=neg, minlength=n_checks).astype(np.int64)
        # leave-one-out product: divide out the edge's own factor
        excl_log = check_log[edge_check] - logmag
        excl_neg = (check_neg[edge_check] - neg) & 1
        val = check_sign[edge_check] * np.where(excl_neg, -1.0, 1.0) * np.exp(excl_log)
        c2v = 2.0 * np.arctanh(np.clip(val, -CLIP, CLIP))

        total = llr + np.bincount(edge_var, weights=c2v, minlength=n_vars)
        bits = (total < 0).astype(np.uint8)
        v2c = total[edge_var] - c2v
        if _satisfied(edge_check, edge_var, n_checks, syndrome, bits):
            return bits, True, it
    return bits, False, max_iter
