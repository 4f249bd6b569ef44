fn main() {
    println!("simdrive");
}
