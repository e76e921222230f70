# Unit tests for quadosc.cli
