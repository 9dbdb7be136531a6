"""Process tomography of the effective single-qubit channel."""
