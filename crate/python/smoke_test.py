"""Smoke test for the qubit_film_py extension.

Build first:
    cargo build -p qubit-film-py --release --features extension-module
then run from the repository root:
    python3 python/smoke_test.py
"""

import importlib.machinery
import importlib.util
import json
import math
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load_extension():
    try:
        import qubit_film_py

        return qubit_film_py
    except ImportError:
        pass
    for profile in ("release", "debug"):
        lib = ROOT / "target" / profile / "libqubit_film_py.so"
        if lib.exists():
            loader = importlib.machinery.ExtensionFileLoader("qubit_film_py", str(lib))
            spec = importlib.util.spec_from_loader("qubit_film_py", loader)
            module = importlib.util.module_from_spec(spec)
            loader.exec_module(module)
            return module
    sys.exit("qubit_film_py not built")


def main():
    qf = load_extension()

    eps = qf.drude_permittivity(340.0)
    assert eps.real < 0 < eps.imag, eps
    perp, par = qf.emt_permittivities(500.0)
    assert isinstance(perp, complex) and isinstance(par, complex)

    enp = qf.special_wavelength("hmm", "enp", 300.0, 2000.0)
    enz = qf.special_wavelength("hmm", "enz", 300.0, 2000.0)
    assert abs(enp - 395.3) < 0.5 and abs(enz - 551.2) < 0.5, (enp, enz)

    rates = qf.RateTriple(1.0, 0.5, 0.3)
    assert rates.concurrence(0.0) == 0.0
    rho = rates.evolve_product(1.5)
    assert abs(qf.wootters_concurrence(rho) - rates.concurrence(1.5)) < 1e-10

    try:
        qf.RateTriple(-1.0, 0.0, 0.0)
    except ValueError:
        pass
    else:
        raise AssertionError("negative gamma_s accepted")

    g = qf.vacuum_greens("x", 100.0, 500.0)
    assert g.imag > 0, g

    config = qf.Config.from_json(
        json.dumps(
            {
                "geometry": {"d_nm": 20, "orientation": "x"},
                "film": {"drude": {}},
                "sweep": {"lambda_min_nm": 300, "lambda_max_nm": 400, "lambda_count": 5, "t_count": 11},
            }
        )
    )
    spectrum = config.rate_spectrum()
    assert len(spectrum) == 5 and all(math.isfinite(row[1]) for row in spectrum)
    lambdas, times, values = config.concurrence_map()
    assert len(values) == len(lambdas) == 5 and len(values[0]) == len(times) == 11
    assert all(0.0 <= c <= 1.0 for row in values for c in row)
    single = config.rates(340.0)
    assert single.gamma_s > 0

    try:
        qf.Config.from_json('{"film": "vacuum", "colour": 1}')
    except ValueError as err:
        assert "colour" in str(err)
    else:
        raise AssertionError("unknown key accepted")

    print("smoke test ok:", dict(config.special_wavelengths()), single)


if __name__ == "__main__":
    main()
