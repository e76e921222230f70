# Integration tests for quadosc
