from ptolab.cli import main

raise SystemExit(main())
