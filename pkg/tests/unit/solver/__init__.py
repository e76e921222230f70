# Unit tests for quadosc.solver
