import pytest

from diskmod import (
    BERGMAN,
    HARDY,
    MultiplierPair,
    QuotientSpec,
    certify_spec,
    poly,
    weighted_bergman,
)

CORPUS_BASES = (HARDY, BERGMAN, weighted_bergman(0.5), weighted_bergman(1.0))


def pair_1_z():
    return MultiplierPair(poly([1]), poly([0, 1]))


def pair_zhalf_1():
    return MultiplierPair(poly([-0.5, 1]), poly([1]))


CORPUS_PAIRS = (pair_1_z, pair_zhalf_1)


@pytest.fixture(scope="session")
def corpus():
    """The eight certified specs: four base kinds, two multiplier pairs."""
    return [
        certify_spec(QuotientSpec(base=base, theta=make_pair()))
        for base in CORPUS_BASES
        for make_pair in CORPUS_PAIRS
    ]
