import numpy as np

from wiretap_jamming import ChannelRealization


def cn(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_channel(rng, b=2, e=2, t1=1, t2=1):
    return ChannelRealization(cn(rng, b, t1), cn(rng, b, t2), cn(rng, e, t1), cn(rng, e, t2))


def random_psd(rng, t, p, rank=None):
    """Random PSD matrix with trace ``p`` (or less when ``p`` is drawn)."""
    k = t if rank is None else rank
    a = cn(rng, t, k)
    f = a @ a.conj().T
    return f * (p / np.real(np.trace(f)))


def logdet2(m):
    """log2 |det m| by LU, independent of the library's Cholesky path."""
    return float(np.linalg.slogdet(m)[1] / np.log(2.0))
