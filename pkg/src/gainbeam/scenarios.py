"""Built-in scenario library.

Names follow the figure layout of the accompanying study: fig2a-fig2d
sweep the potential scale eta with the beam center off axis, fig4/fig5
compare propagation with and without gain-loss for two widths, fig6 shows
the width-dependent fate of beams launched with the stationary momentum,
and fig7 replays fig6/fig4 initial conditions on the locally quadratic
potential (where the closed-form oracle applies).

The caption value B0 = i is used for the fig2 family; "-alt" variants
with B0 = i/2 are included because the narrower width shows a stronger
width contribution.
"""

from .config import GaussianSettings, GridSettings, InitialBeam, ScenarioConfig

__all__ = ["scenario_library"]

Z_MAX_DEFAULT = 30.0


def _tanh_potential(eta, gamma=1.0, omega=1.0, hermitian=False):
    return {
        "kind": "pt_tanh_gaussian",
        "gamma": gamma,
        "omega": omega,
        "eta": eta,
        "hermitian": hermitian,
    }


def _quadratic_potential(omega=1.0, gamma=1.0):
    return {"kind": "quadratic_linear", "omega": omega, "gamma": gamma, "hermitian": False}


def _scenario(name, potential, q0, p0, b0, propagators=("gaussian", "grid"),
              half_width=None):
    if half_width is None:
        half_width = 8.0 * potential["eta"] if potential["kind"] == "pt_tanh_gaussian" else 20.0
    return ScenarioConfig(
        name=name,
        potential=potential,
        initial=InitialBeam(q0=q0, p0=p0, b0=b0),
        propagators=propagators,
        z_max=Z_MAX_DEFAULT,
        gaussian=GaussianSettings(dz=1e-3),
        grid=GridSettings(half_width=half_width, n_points=4096, dz=1e-3),
        sample_stride=100,
    )


def scenario_library() -> dict:
    """Named built-in scenarios, ready to run or to use as templates."""
    lib = {}

    # eta sweep: same q0/eta for the first three, then large eta with small q0
    for name, eta, q0 in (
        ("fig2a", 5.0, 1.0),
        ("fig2b", 10.0, 2.0),
        ("fig2c", 15.0, 3.0),
        ("fig2d", 15.0, 1.0),
    ):
        lib[name] = _scenario(name, _tanh_potential(eta), q0=q0, p0=0.0, b0=1j)
        alt = f"{name}-alt"
        lib[alt] = _scenario(alt, _tanh_potential(eta), q0=q0, p0=0.0, b0=0.5j)

    # large displacement into the loss region, with and without gain-loss
    for name, b0 in (("fig4-top", 1j), ("fig4-bottom", 0.5j)):
        lib[name] = _scenario(name, _tanh_potential(10.0), q0=-4.0, p0=0.0, b0=b0)
        herm = f"{name}-hermitian"
        lib[herm] = _scenario(
            herm, _tanh_potential(10.0, hermitian=True), q0=-4.0, p0=0.0, b0=b0
        )

    # same comparison closer to the gain-loss slope
    for name, b0 in (("fig5-top", 1j), ("fig5-bottom", 0.5j)):
        lib[name] = _scenario(name, _tanh_potential(10.0), q0=-1.0, p0=0.0, b0=b0)
        herm = f"{name}-hermitian"
        lib[herm] = _scenario(
            herm, _tanh_potential(10.0, hermitian=True), q0=-1.0, p0=0.0, b0=b0
        )

    # width-dependent fate of beams launched with the stationary momentum
    for name, b0 in (("fig6-top", 0.5j), ("fig6-mid", 1j), ("fig6-bottom", 2j)):
        lib[name] = _scenario(name, _tanh_potential(10.0), q0=0.0, p0=-1.0, b0=b0)

    # fig6 / fig4-top initial conditions on the locally quadratic potential.
    # No grid propagator here: a linear gain slope on a periodic domain feeds
    # exponentially growing edge modes over long distances (see README,
    # "Numerical notes"), and the reference figures use the parameter
    # dynamics only for this potential.
    for name, q0, p0, b0 in (
        ("fig7-top", 0.0, -1.0, 0.5j),
        ("fig7-mid", 0.0, -1.0, 2j),
        ("fig7-bottom", -4.0, 0.0, 1j),
    ):
        lib[name] = _scenario(
            name,
            _quadratic_potential(),
            q0=q0,
            p0=p0,
            b0=b0,
            propagators=("gaussian", "oracle"),
        )
    return lib
