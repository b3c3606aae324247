from functools import lru_cache

import pytest

from k3cox.database import database, get_record
from k3cox.linsys import K3Surface


@lru_cache(maxsize=None)
def surface(key) -> K3Surface:
    rec = get_record(key)
    return K3Surface(rec.lattice, rec.neg_curves)


RECORDS = database()
NAMES = [r.name for r in RECORDS]


@pytest.fixture
def s1():
    return surface("S_1")


@pytest.fixture
def s411():
    return surface("S_{4,1,1}")
