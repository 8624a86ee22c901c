import hashlib

import numpy as np
from scipy.ndimage import uniform_filter

from deepverif.grid.grid_field import FieldStack


def member_rng(seed, member, variable):
    """
    Random generator of one (seed, member, variable) triple.

    Streams are derived by hashing, so a member's noise does not depend on
    how many other members exist or in which order they are drawn.
    """
    key = "{}:{}:{}".format(int(seed), int(member), variable).encode()
    digest = hashlib.blake2b(key, digest_size=8).digest()
    return np.random.default_rng(int.from_bytes(digest, "little"))


def smooth_noise(rng, shape, correlation_length):
    """
    Unit-variance Gaussian noise smoothed by a square box filter.

    The box mean of L x L independent draws has standard deviation 1 / L,
    so the filtered noise is scaled back by L. The filter wraps around both
    edges.

    :param rng: numpy Generator
    :param shape: (H, W)
    :param correlation_length: box width in cells, 0 or 1 for white noise
    """
    noise = rng.standard_normal(shape)
    width = int(correlation_length)
    if width <= 1:
        return noise
    return uniform_filter(noise, size=width, mode="wrap") * width


def perturb_ic(ic, cfg, member):
    """
    Perturbed copy of an initial state for one ensemble member.

    Member 0 is the control and gets ic back unchanged, as does any variable
    with zero amplitude. Otherwise the noise depends only on
    (cfg.seed, member, variable), so perturbing several history states of
    one member adds the same noise to each.

    :param ic: FieldStack
    :param cfg: PerturbationConfig
    :param member: index in [0, cfg.n_members)
    :return: FieldStack
    """
    member = int(member)
    if not 0 <= member < cfg.n_members:
        raise ValueError("member {} outside [0, {})".format(
            member, cfg.n_members))
    if member == 0:
        return ic

    fields = []
    for field in ic:
        amplitude = cfg.amplitude_of(field.variable)
        if amplitude == 0.0:
            fields.append(field)
            continue
        rng = member_rng(cfg.seed, member, field.variable)
        noise = smooth_noise(rng, field.spec.shape, cfg.correlation_length)
        fields.append(field.with_values(field.values + amplitude * noise))
    return FieldStack(tuple(fields))
