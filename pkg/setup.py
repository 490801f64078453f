from setuptools import setup, find_packages

setup(name='adseed',
      version='0.1.0',
      long_description=open('README.md').read(),
      long_description_content_type="text/markdown",
      license="BSD-3-Clause",
      packages=find_packages(include=['adseed', 'adseed.*']),
      description='Two-stage adaptive seeding: greedy, locally-adaptive and SOSP solvers with brute-force oracles',
      python_requires='>=3.8',
      install_requires=[
            "numpy",
            "scipy",
      ],
      extras_require={
            "test": ["pytest"],
      },
      entry_points={
            "console_scripts": ["adseed=adseed.harness.cli:main"],
      },
      )
