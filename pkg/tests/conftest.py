import os

import pytest
from hypothesis import HealthCheck, settings

from pfaffrig import exclusion as ex
from pfaffrig.pfaffian import family_catalog, get_family

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, derandomize=True, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

FAMILY_IDS = [s.id for s in family_catalog()]


@pytest.fixture(scope="session")
def members():
    cache = {}

    def get(fid, seed=1):
        if (fid, seed) not in cache:
            cache[(fid, seed)] = ex.select_member(get_family(fid), seed)
        return cache[(fid, seed)]
    return get


@pytest.fixture(scope="session")
def family_certs(members):
    cache = {}

    def get(fid):
        if fid not in cache:
            cache[fid] = ex.certify_family(get_family(fid), member=members(fid))
        return cache[fid]
    return get


def cert_for(certs, centre):
    for c in certs:
        if c.centre == centre:
            return c
    raise KeyError(centre)


def deg30_case_b(member):
    """Member moved to a 1/5(1,2,3) point with y1^2*z removed from F3."""
    spec = member.spec
    cr = ex.CentreRun(spec, member, 5, 2, 1, ex.DEFAULT_BUDGET)
    loc = cr.local("y1").zeroed([((4, 5), "z*y1")])
    method, pl = ex.deg30_52_branch(cr, loc)
    return loc, ex.Certificate(spec.id, "5/(1,2,3)#1", method, pl)


def deg20_alpha_zero(member):
    """Member at the 1/4 point whose normal form has alpha = 0.

    The z-linear part of a5 is replaced by the y^2 z-form of F2, which makes
    the v*z0 coefficient vanish after normalization.
    """
    from pfaffrig.wpoly import GradedPoly

    spec = member.spec
    cr = ex.CentreRun(spec, member, 4, 1, 1, ex.DEFAULT_BUDGET)
    loc = cr.local("y")
    sp = loc.space
    a5 = loc.entry(1, 3)
    zs = (sp.index("z0"), sp.index("z1"))
    rest = GradedPoly(sp, {e: c for e, c in a5.terms.items() if not (e[zs[0]] or e[zs[1]])}, loc.p)
    l0 = loc.zeroed([((1, 3), "z0"), ((1, 3), "z1")])
    new = rest + loc.var("z0").scale(l0.coef(2, "y^2*z0")) + loc.var("z1").scale(l0.coef(2, "y^2*z1"))
    loc2 = ex.Local(member, loc.M.with_entry((1, 3), new), loc.k)
    norm = ex._normal_deg20_4(loc2)
    method, pl = ex.deg20_4_branch(cr, norm)
    return norm, ex.Certificate(spec.id, "4/(1,1,3)#1", method, pl)
