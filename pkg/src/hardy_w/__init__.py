"""Hardy nonlocality of N-qubit W states: closed-form model, optimizers, checks."""

__version__ = "0.1.0"
