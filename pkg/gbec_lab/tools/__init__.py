"""Sweeps, reports and table I/O"""
