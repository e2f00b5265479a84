"""Single-photon transport through emitter chains coupled to a waveguide."""
