"""
Package initialization file for src.
""" 