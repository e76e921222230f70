# Unit tests for quadosc.physics
