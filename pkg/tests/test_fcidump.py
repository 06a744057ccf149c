"""FCIDUMP serialization tests: round trips, header handling, error reporting."""

import numpy as np
import pytest

from vqsm.chem import chain_geometry, mo_integrals_for
from vqsm.errors import FcidumpParseError
from vqsm.fcidump import parse_fcidump, write_fcidump
from vqsm.jw import jordan_wigner
from vqsm.oracles import fci_solve

MINIMAL = """&FCIDUMP NORB=2,NELEC=2,MS2=0,
 ORBSYM=1,1,
 ISYM=1,
&END
 0.5 1 1 1 1
-1.25 1 1 0 0
-0.47 2 2 0 0
 0.71 0 0 0 0
"""


def test_minimal_header():
    mo = parse_fcidump(MINIMAL)
    assert mo.n_orb == 2
    assert mo.n_elec == 2
    assert mo.h[0, 0] == -1.25
    assert mo.h[1, 1] == -0.47
    assert mo.g[0, 0, 0, 0] == 0.5
    assert mo.e_nuc == 0.71


def test_h2_round_trip(h2_bundle):
    mo, _ = mo_integrals_for(h2_bundle.geometry)
    text = write_fcidump(mo)
    back = parse_fcidump(text)
    assert back.n_elec == mo.n_elec
    # The file stores the unique (lower-triangle) elements; the parsed arrays
    # are exactly symmetric, so compare against the written representatives.
    tril = np.tril_indices(mo.n_orb)
    assert np.array_equal(back.h[tril], mo.h[tril])
    assert np.array_equal(back.h, back.h.T)
    assert np.allclose(back.g, mo.g, atol=1e-15)
    assert back.e_nuc == mo.e_nuc
    # Idempotence of the normal form.
    assert write_fcidump(back) == text


def test_h4_end_to_end_energy(h4_bundle):
    mo, _ = mo_integrals_for(h4_bundle.geometry)
    back = parse_fcidump(write_fcidump(mo))
    e_file = fci_solve(jordan_wigner(back), sector=(4, 0)).e0
    assert abs(e_file - h4_bundle.fci.e0) < 1e-10


def test_missing_header():
    with pytest.raises(FcidumpParseError) as exc:
        parse_fcidump("1.0 1 1 0 0\n")
    assert exc.value.line_number == 1


def test_missing_norb():
    with pytest.raises(FcidumpParseError):
        parse_fcidump("&FCIDUMP NELEC=2,MS2=0,\n&END\n")


def test_out_of_range_index():
    text = MINIMAL + " 0.1 3 1 0 0\n"
    with pytest.raises(FcidumpParseError) as exc:
        parse_fcidump(text)
    assert exc.value.line_number == len(MINIMAL.splitlines()) + 1


def test_conflicting_duplicate():
    text = MINIMAL + "-1.30 1 1 0 0\n"
    with pytest.raises(FcidumpParseError) as exc:
        parse_fcidump(text)
    assert "conflicting" in str(exc.value)


def test_consistent_duplicate_tolerated():
    text = MINIMAL + "-1.25 1 1 0 0\n"
    mo = parse_fcidump(text)
    assert mo.h[0, 0] == -1.25


def test_malformed_body_line():
    text = MINIMAL + "garbage here\n"
    with pytest.raises(FcidumpParseError):
        parse_fcidump(text)
