import pytest

from stepbound.semantics import DomainConfig


def nat(n):
    return ("nat", n)


def natlist(xs):
    return ("list", tuple(("nat", x) for x in xs))


@pytest.fixture
def small_cfg():
    return DomainConfig(nat_max=4, list_len=3, elems=3, state_max=4)
