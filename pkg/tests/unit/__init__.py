# Unit tests for quadosc
