use serde_json::json;

use schema_scalpel::render as render_schema;

use crate::context::load_schemas;
use crate::error::CliError;
use crate::output::Jsonl;
use crate::RenderArgs;

pub fn run(args: RenderArgs) -> Result<i32, CliError> {
    let Some(format) = args.variant.static_format() else {
        return Err(CliError::Usage(format!(
            "render takes `enhanced` or `base`, not `{}`",
            args.variant.name()
        )));
    };
    let schemas = load_schemas(&args.schemas)?;
    let mut out = Jsonl::open(args.output.out.as_deref(), args.output.stamp)?;
    let many = schemas.len() > 1;
    for (id, schema) in schemas.iter() {
        let text = render_schema(schema, format);
        if many {
            println!("# {id}");
        }
        print!("{text}");
        out.write(json!({"schema_id": id, "variant": args.variant.name(), "text": text}))?;
    }
    out.finish()?;
    Ok(0)
}
